"""Checks a configuration against a panel without sampling"""
import configargparse

from arlbsg.core.errors import InvalidParameterError
from arlbsg.core.params import validate_config
from models.fit import add_data_arguments, add_model_arguments, \
    load_config, load_data


def get_arguments(args=None):

    flags = configargparse.ArgParser(
        ignore_unknown_config_file_keys=True,
        description="""
            Loads the panel and the configuration and reports every
            violated invariant; exits with an error record if any.
        """
    )
    add_model_arguments(flags)
    add_data_arguments(flags)
    return flags.parse_args(args)


def print_arguments(args):

    print('\nArguments (models/validate.py):')
    print('\tConfig: {0}'.format(args.config))
    print('\tPreset: {0}'.format(args.preset))
    print('\tData: {0}\n'.format(args.data))


def main(args=None):
    flags = get_arguments(args)
    print_arguments(flags)

    config = load_config(flags)
    data = load_data(flags)
    report = validate_config(config, data)
    if not report.passed:
        raise InvalidParameterError('; '.join(report.violations))
    print(f'\t{data}: configuration is valid')
    return report


if __name__ == '__main__':
    main()
