"""Fits the dynamic clustering model to a panel

    Usage:
    -----
    > arlbsg fit --config config/model.config --data panel.csv \
                 --out-dir data/fits/run --chains 2 --seed 7

    Layout of the output folder:

        manifest.json
        model.config                 resolved configuration snapshot
        chain_<c>/draws.bin          retained draws (binary format)
        chain_<c>/draws_from_<i>.bin draws of a resumed run
        chain_<c>/last_state.pickle  restart point for --resume
        chain_<c>/chain.json         acceptance rates, timing and metadata
        chain_<c>/time.json          wall clock of the chain
"""
import logging
import time
from pathlib import Path

import configargparse

from arlbsg.core.chain import run_chain
from arlbsg.core.errors import IngestionError, InvalidParameterError
from arlbsg.core.params import PRESETS, ModelConfig, validate_config
from arlbsg.core.state import ChainState
from arlbsg.dumpers.draws import write_draws
from arlbsg.dumpers.manifest import build_manifest, \
    read_manifest, write_manifest
from arlbsg.loaders.draws import read_fit_draws
from arlbsg.loaders.panel import load_panel_csv
from arlbsg.utils import str2bool
from arlbsg.utils.decorators import benchmarked

CHAIN_REPORT = 'chain.json'


def add_data_arguments(flags):
    """Flags shared by every subcommand reading a panel"""
    flags.add('--data', dest='data', type=str, default=None,
              help='Long format csv panel: station_id, time, y, lat, lon, ...')

    flags.add('--angle-columns', dest='angle_columns', type=str, nargs='*',
              default=[],
              help='Covariates in degrees encoded as sin and cos')

    flags.add('--square-columns', dest='square_columns', type=str, nargs='*',
              default=[],
              help='Covariates whose square is added')

    flags.add('--interactions', dest='interactions', type=str, nargs='*',
              default=[],
              help='Pairwise interactions written as `a:b`')


def add_model_arguments(flags):
    """Flags overriding the configuration file"""
    flags.add('--config', '-c', dest='config', is_config_file=True,
              default=None,
              help='INI file with a [model_args] section (every ModelConfig field)')

    flags.add('--preset', dest='preset', type=str, default=None,
              choices=('simulation', 'fsp'),
              help='Named MCMC controls applied over the file values')

    flags.add('--seed', '-s', dest='seed', type=int, default=None,
              help='Chain seed, chain c uses seed + c')

    flags.add('--iters', dest='n_iter', type=int, default=None,
              help='Total number of sweeps')

    flags.add('--burnin', dest='burn_in', type=int, default=None,
              help='Number of sweeps discarded')

    flags.add('--thin', dest='thin', type=int, default=None,
              help='Keep every `thin` sweep after burn-in')

    flags.add('--store-latents', dest='store_latents', type=str2bool,
              nargs='?', const=True, default=None,
              help='Store eps, lambda and xi with every draw')


def get_arguments(args=None):

    flags = configargparse.ArgParser(
        ignore_unknown_config_file_keys=True,
        description="""
            Runs one or more seeded chains of the sampler and stores their
            draws, last states and a run manifest.
        """
    )
    add_model_arguments(flags)
    add_data_arguments(flags)

    flags.add('--chains', dest='chains', type=int, default=1,
              help='Number of independent chains')

    flags.add('--out-dir', '-o', dest='out_dir', type=str,
              default='data/fits',
              help='Output folder')

    flags.add('--resume', dest='resume', type=str2bool, nargs='?',
              const=True, default=False,
              help='Continue every chain from chain_<c>/last_state.pickle')

    flags.add('--show-progress', dest='show_progress', type=str2bool,
              nargs='?', const=True, default=False,
              help='Display a progress bar per chain')

    return flags.parse_args(args)


def print_arguments(args):

    print('\nArguments (models/fit.py):')
    print('\tConfig: {0}'.format(args.config))
    print('\tPreset: {0}'.format(args.preset))
    print('\tData: {0}'.format(args.data))
    print('\tSeed: {0}'.format(args.seed))
    print('\tChains: {0}'.format(args.chains))
    print('\tIterations: {0}'.format(args.n_iter))
    print('\tBurn-in: {0}'.format(args.burn_in))
    print('\tThin: {0}'.format(args.thin))
    print('\tStore latents: {0}'.format(args.store_latents))
    print('\tOutput: {0}'.format(args.out_dir))
    print('\tResume: {0}\n'.format(args.resume))


def parse_interactions(pairs):
    out = []
    for pair in pairs:
        parts = pair.split(':')
        if len(parts) != 2 or not all(parts):
            raise InvalidParameterError(
                f'interactions are written as `a:b` got {pair}')
        out.append(tuple(parts))
    return out


def load_data(args):
    if args.data is None:
        raise InvalidParameterError('--data is required')
    return load_panel_csv(args.data,
                          angle_columns=args.angle_columns,
                          square_columns=args.square_columns,
                          interactions=parse_interactions(args.interactions))


def load_config(args):
    """ModelConfig from the file, then the preset, then the flags"""
    overrides = {k: getattr(args, k) for k in ('seed', 'n_iter', 'burn_in',
                                                'thin', 'store_latents')}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.config is not None:
        config = ModelConfig.from_config_file(args.config)
    else:
        config = ModelConfig()
    if args.preset is not None:
        config = config.replace(**PRESETS[args.preset])
    return config.replace(**overrides)


def check_inputs(config, data):
    report = validate_config(config, data)
    if not report.passed:
        raise InvalidParameterError('; '.join(report.violations))
    return report


def chain_dir(out_dir, chain):
    return Path(out_dir) / f'chain_{chain}'


class FitTask:
    """Fits chain `chain` of a run; picklable for pool mappers"""

    def __init__(self, config, data, out_dir, show_progress=False,
                 resume=False):
        self.config = config
        self.data = data
        self.out_dir = out_dir
        self.show_progress = show_progress
        self.resume = resume

    def __call__(self, chain):
        return fit_chain(self.config.replace(seed=self.config.seed + chain),
                         self.data, chain_dir(self.out_dir, chain),
                         show_progress=self.show_progress,
                         resume=self.resume)


@benchmarked
def fit_chain(config, data, target_dir, show_progress=False, resume=False):
    """Runs a chain and writes its draws, report and last state

    Returns:
    -------
    * target_dir: str
        also holds time.json
    """
    target_dir = Path(target_dir)
    target_dir.mkdir(parents=True, exist_ok=True)
    state = None
    filename = 'draws.bin'
    if resume:
        state = ChainState.load(target_dir / 'last_state.pickle')
        filename = f'draws_from_{state.iteration}.bin'

    draws = run_chain(config, data, state=state, show_progress=show_progress,
                      checkpoint_dir=target_dir)
    write_draws(draws, target_dir / filename)
    report = {'draws_file': filename, 'draws': draws.num_draws,
              'acceptance': draws.acceptance, 'timing': draws.timing,
              'metadata': draws.metadata}
    write_manifest(report, target_dir, filename=CHAIN_REPORT)
    return str(target_dir)


def run_fit(args, mapper=map):
    """Shared by `models/fit.py` and the pooled `jobs/fit.py`

    Returns:
    -------
    * out_dir: pathlib.Path
    """
    started = time.time()
    config = load_config(args)
    data = load_data(args)
    check_inputs(config, data)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config.to_config_file(out_dir / 'model.config')

    task = FitTask(config, data, out_dir, show_progress=args.show_progress,
                   resume=args.resume)
    chain_dirs = [Path(d) for d in mapper(task, range(args.chains))]
    reports = {d.name: read_manifest(d / CHAIN_REPORT) for d in chain_dirs}

    manifest = build_manifest(
        config, data, reports,
        timing={'total_minutes': (time.time() - started) / 60,
                'sampling_minutes': sum(
                    r['timing'].get('sampling_minutes', 0.0)
                    for r in reports.values())},
        data_path=str(Path(args.data).resolve()),
        transforms={'angle_columns': args.angle_columns,
                    'square_columns': args.square_columns,
                    'interactions': args.interactions},
        resumed=bool(args.resume))
    write_manifest(manifest, out_dir)
    logging.info(f'fit written to {out_dir}')
    return out_dir


def load_fit(run_dir, data_path=None):
    """Manifest, pooled draws and panel of a fit folder

        The panel is read again from the manifest's path (or `data_path`)
        and must match the fingerprint the fit was run on.
    """
    manifest, draws = read_fit_draws(run_dir)
    transforms = manifest.get('transforms', {})
    path = data_path or manifest['data_path']
    data = load_panel_csv(
        path,
        angle_columns=transforms.get('angle_columns', []),
        square_columns=transforms.get('square_columns', []),
        interactions=parse_interactions(transforms.get('interactions', [])))
    if data.fingerprint != manifest['dataset']['fingerprint']:
        raise IngestionError(f'{path} differs from the panel the fit used')
    return manifest, draws, data


def main(args=None):
    flags = get_arguments(args)
    print_arguments(flags)
    return str(run_fit(flags))


if __name__ == '__main__':
    main()
