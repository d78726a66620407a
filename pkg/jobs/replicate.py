"""Repeated simulation study

    Usage:
    -----
    > ARLBSG_WORKERS=4 arlbsg replicate --mode balanced --replications 50 \
                                        --config config/simulation.config

    Every replicate r simulates the scenario with seed + r, fits a chain with
    the model seed + r and scores the fit against the truth. The table is
    written to <out-dir>/replicates.csv along with its column means.
"""
import multiprocessing as mp
from pathlib import Path

import configargparse

from arlbsg.scenarios.study import replicate
from jobs.fit import num_workers
from models.fit import add_model_arguments, load_config
from models.simulate import get_arguments as get_scenario_arguments, \
    spec_from_arguments


def get_arguments(args=None):

    flags = configargparse.ArgParser(
        ignore_unknown_config_file_keys=True,
        allow_abbrev=False,
        description="""
            Simulates, fits and scores a scenario several times.
        """
    )
    add_model_arguments(flags)

    flags.add('--replications', dest='replications', type=int, default=10,
              help='Number of replicates')

    flags.add('--out-dir', '-o', dest='out_dir', type=str,
              default='data/replicates',
              help='Output folder')

    flags, rest = flags.parse_known_args(args)
    scenario = get_scenario_arguments(rest)
    return flags, scenario


def print_arguments(flags, scenario):

    print('\nArguments (jobs/replicate.py):')
    print('\tConfig: {0}'.format(flags.config))
    print('\tReplications: {0}'.format(flags.replications))
    print('\tMode: {0}'.format(scenario.mode))
    print('\tUnits: {0}'.format(scenario.n))
    print('\tTimes: {0}'.format(scenario.T))
    print('\tOutput: {0}\n'.format(flags.out_dir))


def replicate_batch(flags, scenario):
    config = load_config(flags)
    spec = spec_from_arguments(scenario)

    workers = num_workers(flags.replications)
    if workers > 1:
        with mp.Pool(workers) as pool:
            table = replicate(spec, config, flags.replications,
                              mapper=pool.map)
    else:
        table = replicate(spec, config, flags.replications)

    out_dir = Path(flags.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(out_dir / 'replicates.csv', index=False)
    table.mean(numeric_only=True).to_frame('mean').to_csv(
        out_dir / 'replicates_mean.csv', index_label='metric')
    return out_dir


def main(args=None):
    flags, scenario = get_arguments(args)
    print_arguments(flags, scenario)
    return str(replicate_batch(flags, scenario))


if __name__ == '__main__':
    main()
