"""Exceptions raised by the sampler, the loaders and the command line"""


class InvalidParameterError(ValueError):
    """A distribution or model parameter is outside of its support"""


class IngestionError(ValueError):
    """Malformed panel input

    Attributes:
    ----------
    * rows: list<int>
        1-based line numbers of the offending csv rows (header is line 1)
    """
    def __init__(self, message, rows=None):
        super(IngestionError, self).__init__(message)
        self.rows = list(rows) if rows is not None else []

    @property
    def details(self):
        return {'rows': self.rows}


class NumericalError(ArithmeticError):
    """Non finite values or failed factorizations

    Attributes:
    ----------
    * details: dict
        diagnostics e.g `cell`, `condition_number`
    """
    def __init__(self, message, **details):
        super(NumericalError, self).__init__(message)
        self.details = details


class ChainError(RuntimeError):
    """Wraps any error raised inside a sweep with its location"""
    def __init__(self, iteration, block, error):
        super(ChainError, self).__init__(
            f'iteration {iteration} block `{block}`: {error}')
        self.iteration = iteration
        self.block = block
        self.error = error

    @property
    def details(self):
        details = {'iteration': self.iteration, 'block': self.block}
        details.update(getattr(self.error, 'details', {}))
        return details
