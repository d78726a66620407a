"""Generates a synthetic panel with its ground truth

    Usage:
    -----
    > arlbsg simulate --mode imbalanced --n 30 --T 20 --seed 3 \
                      --out-dir data/scenarios/imbalanced

    Writes panel.csv (the format `fit` reads), truth_partitions.csv,
    truth_effects.csv, truth_cocluster/cocluster_t<t>.csv and scenario.json.
"""
import json
from pathlib import Path

import configargparse

from arlbsg.dumpers.panel import write_panel_csv, write_truth
from arlbsg.scenarios.base import DEFAULT_REGION, ScenarioSpec, generate


def get_arguments(args=None):

    flags = configargparse.ArgParser(
        ignore_unknown_config_file_keys=True,
        description="""
            Simulates a panel whose units jump between clusters over time,
            either balanced or imbalanced.
        """
    )

    flags.add('--config', '-c', dest='config', is_config_file=True,
              default=None, help='Config file with scenario keys')

    flags.add('--n', dest='n', type=int, default=64,
              help='Number of units (stations)')

    flags.add('--T', dest='T', type=int, default=60,
              help='Number of time points')

    flags.add('--mode', dest='mode', type=str, default='balanced',
              choices=('balanced', 'imbalanced'),
              help='Membership dynamics')

    flags.add('--cluster-means', dest='cluster_means', type=float,
              nargs='+', default=[5.0, 32.0, 60.0],
              help='Cluster atoms')

    flags.add('--cluster-var', dest='cluster_var', type=float, default=1.0,
              help='Within cluster variance')

    flags.add('--jump-rate', dest='jump_rate', type=float, default=0.1,
              help='Share of units jumping per step (balanced)')

    flags.add('--imbalanced-ratio', dest='imbalanced_ratio', type=float,
              nargs='+', default=[0.70, 0.15, 0.15],
              help='Initial cluster shares (imbalanced)')

    flags.add('--p', dest='p', type=int, default=5,
              help='Number of covariates')

    flags.add('--tau-sq', dest='tau_sq', type=float, default=2.0,
              help='Spatial variance')

    flags.add('--phi-km', dest='phi_km', type=float, default=100.0,
              help='Spatial range in kilometers')

    flags.add('--region', dest='region_bounds', type=float, nargs=4,
              default=list(DEFAULT_REGION),
              help='lat_min lat_max lon_min lon_max')

    flags.add('--seed', '-s', dest='seed', type=int, default=0,
              help='Scenario seed')

    flags.add('--out-dir', '-o', dest='out_dir', type=str,
              default='data/scenarios',
              help='Output folder')

    return flags.parse_args(args)


def print_arguments(args):

    print('\nArguments (models/simulate.py):')
    print('\tUnits: {0}'.format(args.n))
    print('\tTimes: {0}'.format(args.T))
    print('\tMode: {0}'.format(args.mode))
    print('\tJump rate: {0}'.format(args.jump_rate))
    print('\tCovariates: {0}'.format(args.p))
    print('\tSeed: {0}'.format(args.seed))
    print('\tOutput: {0}\n'.format(args.out_dir))


def spec_from_arguments(args):
    return ScenarioSpec(
        n=args.n, T=args.T, cluster_means=tuple(args.cluster_means),
        cluster_var=args.cluster_var, mode=args.mode,
        jump_rate=args.jump_rate,
        imbalanced_ratio=tuple(args.imbalanced_ratio), p=args.p,
        tau_sq=args.tau_sq, phi_km=args.phi_km,
        region_bounds=tuple(args.region_bounds), seed=args.seed)


def main(args=None):
    flags = get_arguments(args)
    print_arguments(flags)

    spec = spec_from_arguments(flags)
    data, truth = generate(spec)

    out_dir = Path(flags.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_panel_csv(data, out_dir / 'panel.csv')
    write_truth(truth, data, out_dir)
    with (out_dir / 'scenario.json').open('w') as f:
        json.dump(spec.to_dict(), f, indent=2)
    return str(out_dir)


if __name__ == '__main__':
    main()
