TRUTHY = ('yes', 'true', 't', 'y', '1', 'on')
FALSY = ('no', 'false', 'f', 'n', '0', 'off')


def str2bool(v, exception=None):
    """Boolean model switches from the command line or a .config file

        Reads flags such as --resume, --store-latents and the
        single_cluster / store_latents entries of [model_args].

    Parameters:
    ----------
    * v: str or bool
        case and surrounding blanks are ignored

    * exception: Exception
        raised instead of ValueError, e.g an InvalidParameterError
        naming the offending config key

    Returns:
    -------
    * flag: bool
    """
    if isinstance(v, bool):
        return v
    value = str(v).strip().lower()
    if value in TRUTHY:
        return True
    if value in FALSY:
        return False
    if exception is None:
        raise ValueError(f'boolean value expected got {v!r}')
    raise exception
