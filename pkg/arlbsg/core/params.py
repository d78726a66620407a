"""Objects that define the hyperparameters of a dynamic clustering run."""
import configparser
from collections import namedtuple
from copy import deepcopy

import numpy as np

from arlbsg.core.errors import InvalidParameterError

''' AR1Kernel : namedtuple
        correlation kernel R(t, t') = psi ** |t - t'|

    * psi: float
        autoregressive coefficient, |psi| < 1

    * dim: int
        number of time points T

'''
AR1Kernel = namedtuple('AR1Kernel', 'psi dim')

''' StirlingGammaParams : namedtuple
        SG(a, b, m) prior on the concentration parameter

    * a, b: float
        shapes such that 1 < a / b < m

    * m: int
        number of units the prior is calibrated to (m = n)

'''
StirlingGammaParams = namedtuple('StirlingGammaParams', 'a b m')

''' LogisticBetaParams : namedtuple
        multivariate logistic-beta law LB(a_eps, b_eps, Psi)

    * a_eps, b_eps: float
        positive shapes; logit^-1(eps(t)) ~ Beta(a_eps, b_eps)

    * correlation: AR1Kernel

'''
LogisticBetaParams = namedtuple('LogisticBetaParams',
                                'a_eps b_eps correlation')

''' ValidationReport : namedtuple

    * passed: bool

    * violations: list<str>
        one human readable line per violated invariant

'''
ValidationReport = namedtuple('ValidationReport', 'passed violations')

# MCMC controls for the simulation study and the monthly panel analysis
PRESETS = {
    'simulation': {'n_iter': 20000, 'burn_in': 10000, 'thin': 5},
    'fsp': {'n_iter': 200000, 'burn_in': 20000, 'thin': 25},
}

POSITIVE_FIELDS = ('sg_a', 'sg_b', 'base_a0', 'base_b0',
                   'a_phi', 'b_phi', 'a_rho', 'b_rho', 'a_tau', 'b_tau',
                   'rho_sq', 'psi_step', 'log_phi_step')

FIELD_TYPES = {
    'sg_a': float, 'sg_b': float, 'H': int,
    'base_theta0': float, 'base_sigma0_sq': float,
    'base_a0': float, 'base_b0': float,
    'a_phi': float, 'b_phi': float,
    'a_rho': float, 'b_rho': float,
    'a_tau': float, 'b_tau': float,
    'rho_sq': float, 'estimate_rho_sq': bool,
    'n_iter': int, 'burn_in': int, 'thin': int, 'seed': int,
    'psi_step': float, 'log_phi_step': float,
    'pg_exact_threshold': int, 'moment_window': int,
    'jitter': float, 'gp_nugget': float,
    'k_workers': int, 'single_cluster': bool, 'store_latents': bool,
}

FIELD_HELP = {
    'sg_a': 'Stirling-gamma shape a (prior mean number of clusters a/b)',
    'sg_b': 'Stirling-gamma shape b (larger is more informative)',
    'H': 'Truncation level of the stick-breaking representation',
    'base_theta0': 'Base measure mean (default: panel mean)',
    'base_sigma0_sq': 'Base measure scale (default: twice the panel variance)',
    'base_a0': 'Inverse-gamma shape of the atom variances',
    'base_b0': 'Inverse-gamma scale of the atom variances',
    'a_phi': 'Gamma shape of the spatial range phi',
    'b_phi': 'Gamma rate of the spatial range phi',
    'a_rho': 'Inverse-gamma shape of the coefficients variance',
    'b_rho': 'Inverse-gamma scale of the coefficients variance',
    'a_tau': 'Inverse-gamma shape of the spatial variance',
    'b_tau': 'Inverse-gamma scale of the spatial variance',
    'rho_sq': 'Initial (or fixed) coefficients variance',
    'estimate_rho_sq': 'Whether rho_sq is sampled or held fixed',
    'n_iter': 'Total number of sweeps',
    'burn_in': 'Number of sweeps discarded',
    'thin': 'Keep every `thin` sweep after burn-in',
    'seed': 'Chain seed (64-bit integer)',
    'psi_step': 'Random walk step on atanh(psi)',
    'log_phi_step': 'Random walk step on log(phi)',
    'pg_exact_threshold': 'Largest Polya-gamma count drawn exactly',
    'moment_window': 'Running average window for the lambda proposals',
    'jitter': 'Relative diagonal jitter for near singular matrices',
    'gp_nugget': 'Nugget added to the spatial correlation matrix',
    'k_workers': 'Threads used for the per-stick updates',
    'single_cluster': 'Ablation: force every unit into one cluster',
    'store_latents': 'Store eps, lambda and xi with every draw',
}


class ModelConfig:
    """Hyperparameters and MCMC controls

      Structural constraints that depend on the panel (e.g 1 < a/b < n)
      are checked by `validate_config`; the constructor only rejects
      values outside of their support.
    """

    def __init__(
            self,
            sg_a=1.0,
            sg_b=0.25,
            H=25,
            base_theta0=None,
            base_sigma0_sq=None,
            base_a0=0.1,
            base_b0=0.1,
            a_phi=0.1,
            b_phi=0.1,
            a_rho=0.1,
            b_rho=0.1,
            a_tau=0.1,
            b_tau=0.1,
            rho_sq=1.0,
            estimate_rho_sq=True,
            n_iter=20000,
            burn_in=10000,
            thin=5,
            seed=0,
            psi_step=0.3,
            log_phi_step=0.5,
            pg_exact_threshold=170,
            moment_window=50,
            jitter=1e-10,
            gp_nugget=1e-6,
            k_workers=1,
            single_cluster=False,
            store_latents=False,
    ):
        """Instantiate a model configuration.

        PARAMETERS
        ----------
        * sg_a, sg_b: Stirling-gamma prior SG(a, b, n) on the
                concentration alpha; a/b is the prior mean number
                of clusters [1].

        * H: truncation level; the H-th stick is forced to one.

        * base_theta0, base_sigma0_sq, base_a0, base_b0: base measure
                theta ~ N(theta0, 2 sigma0^2), sigma^2 ~ IG(a0, b0).
                `None` resolves to panel statistics (see `resolve`).

        * a_phi, b_phi: phi ~ Ga(a_phi, b_phi) (rate parametrization).

        * a_rho, b_rho: rho^2 ~ IG(a_rho, b_rho).

        * a_tau, b_tau: tau^2 ~ IG(a_tau, b_tau).

        * n_iter, burn_in, thin: MCMC controls.

        * seed: 64-bit integer; the chain is a deterministic
                function of (config, data, seed).

        REFERENCES:
        ----------
            [1] Zito, Rigon and Dunson, Bayesian nonparametric modeling
                of latent partitions via Stirling-gamma priors, 2023

        """
        kwargs = locals()

        for attr in POSITIVE_FIELDS:
            value = kwargs[attr]
            if value is None or not value > 0:
                raise InvalidParameterError(
                    f'''{attr} must be positive got {value}''')

        if base_sigma0_sq is not None and not base_sigma0_sq > 0:
            raise InvalidParameterError(
                f'''base_sigma0_sq must be positive got {base_sigma0_sq}''')

        if jitter < 0 or gp_nugget < 0:
            raise InvalidParameterError(
                f'''jitter and gp_nugget must be nonnegative
                    got {jitter} and {gp_nugget}''')

        for attr, value in kwargs.items():
            if attr not in ('self',):
                setattr(self, attr, value)

    @classmethod
    def from_preset(cls, preset, **kwargs):
        if preset not in PRESETS:
            raise InvalidParameterError(
                f'''preset must be in {tuple(PRESETS)} got {preset}''')
        params = dict(PRESETS[preset])
        params.update(kwargs)
        return cls(**params)

    @classmethod
    def from_config_file(cls, config_path, section='model_args', **overrides):
        """Reads a INI file having one key per field

        Params:
        ------
            * config_path: str or pathlib.Path

            * section: str
                section holding the model fields

            * overrides: dict
                values taking precedence over the file's
        Usage:
        -----
            > config = ModelConfig.from_config_file('config/model.config',
                                                    seed=7)
        """
        parser = configparser.ConfigParser()
        parser.optionxform = str
        if not parser.read(str(config_path)):
            raise FileNotFoundError(f'config file not found {config_path}')

        params = {}
        for key, raw in parser.items(section):
            if key == 'preset':
                continue
            if key not in FIELD_TYPES:
                raise InvalidParameterError(f'unknown config key `{key}`')
            params[key] = parse_field(key, raw)

        if parser.has_option(section, 'preset'):
            preset = parser.get(section, 'preset')
            params = {**PRESETS[preset], **params}

        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)

    def to_dict(self):
        return {attr: getattr(self, attr) for attr in FIELD_TYPES}

    def to_config_file(self, config_path, section='model_args'):
        parser = configparser.ConfigParser()
        parser.optionxform = str
        parser[section] = {
            k: ('' if v is None else str(v)) for k, v in self.to_dict().items()
        }
        with open(str(config_path), 'w') as f:
            parser.write(f)

    def replace(self, **kwargs):
        params = self.to_dict()
        params.update(kwargs)
        return ModelConfig(**params)

    def resolve(self, data):
        """Fills data-driven base measure defaults

            theta0 = mean(y), sigma0^2 = 2 * var(y) over the observed
            cells of `data`.
        """
        y = data.y[data.observed]
        theta0 = self.base_theta0
        sigma0_sq = self.base_sigma0_sq
        if theta0 is None:
            theta0 = float(np.mean(y))
        if sigma0_sq is None:
            sigma0_sq = 2 * float(np.var(y, ddof=1)) if y.size > 1 else 1.0
            # constant panels
            sigma0_sq = sigma0_sq if sigma0_sq > 0 else 1.0
        return self.replace(base_theta0=theta0, base_sigma0_sq=sigma0_sq)

    @property
    def num_draws(self):
        return max(self.n_iter - self.burn_in, 0) // self.thin

    def stirling_gamma(self, m):
        return StirlingGammaParams(self.sg_a, self.sg_b, m)

    def __eq__(self, other):
        return isinstance(other, ModelConfig) and \
            self.to_dict() == other.to_dict()

    def __repr__(self):
        args = ', '.join(f'{k}={v!r}' for k, v in self.to_dict().items())
        return f'ModelConfig({args})'


def parse_field(key, raw):
    """Converts a raw string into the field's type"""
    kind = FIELD_TYPES[key]
    raw = raw.strip()
    if raw in ('', 'None'):
        return None
    if kind is bool:
        from arlbsg.utils import str2bool
        return str2bool(raw, exception=InvalidParameterError(
            f'`{key}` expects a boolean got {raw}'))
    try:
        if kind is int:
            return int(float(raw)) if 'e' in raw.lower() else int(raw)
        return kind(raw)
    except ValueError:
        raise InvalidParameterError(f'`{key}` expects {kind.__name__} got {raw}')


def validate_config(config, data):
    """Checks every configuration and panel invariant

    Params:
    ------
        * config: ModelConfig

        * data: arlbsg.core.panel.PanelDataset

    Returns:
    -------
        * report: ValidationReport
            never raises; `violations` names each failure
    """
    violations = []
    n = data.n

    ratio = config.sg_a / config.sg_b
    if not 1 < ratio < n:
        violations.append(
            f'Stirling-gamma constraint 1 < sg_a/sg_b < n violated: '
            f'sg_a/sg_b = {ratio:.6g}, n = {n}')

    if config.single_cluster:
        if config.H < 1:
            violations.append(f'H must be at least 1 got {config.H}')
    elif config.H < 2:
        violations.append(
            f'truncation H must be at least 2 (one free stick) got {config.H}')

    if config.thin < 1:
        violations.append(f'thin must be at least 1 got {config.thin}')

    if not 0 <= config.burn_in < config.n_iter:
        violations.append(
            f'0 <= burn_in < n_iter violated: burn_in = {config.burn_in}, '
            f'n_iter = {config.n_iter}')

    if config.pg_exact_threshold < 1:
        violations.append(
            f'pg_exact_threshold must be positive got {config.pg_exact_threshold}')

    if config.moment_window < 1:
        violations.append(
            f'moment_window must be positive got {config.moment_window}')

    if not 0 <= config.seed < 2 ** 64:
        violations.append(f'seed must be a 64-bit unsigned integer got {config.seed}')

    violations.extend(data.check())

    return ValidationReport(len(violations) == 0, violations)
