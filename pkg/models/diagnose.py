"""Predictive criteria and sampler diagnostics of a fit

    Writes into the fit folder (or --out-dir):

        criteria.csv        WAIC and PSIS-LOO (deviance scale) with components
        pointwise.csv       per observed cell contributions and Pareto k
        pareto_k_hist.csv   Pareto k counts per conventional bin
        acceptance.csv      Metropolis acceptance rates per chain and block

    The elapsed minutes are merged into the fit manifest (diagnose_minutes).
"""
import time
from pathlib import Path

import configargparse
import pandas as pd

from arlbsg.core.params import ModelConfig
from arlbsg.core.posterior.criteria import psis_loo, waic
from arlbsg.core.posterior.identities import posterior_mean_identity
from arlbsg.dumpers.manifest import record_timing
from arlbsg.dumpers.summaries import write_criteria, write_pareto_k_hist, \
    write_pointwise
from models.fit import load_fit


def get_arguments(args=None):

    flags = configargparse.ArgParser(
        ignore_unknown_config_file_keys=True,
        description="""
            WAIC, PSIS-LOO, Pareto k and acceptance report of a fit folder.
        """
    )

    flags.add('--config', '-c', dest='config', is_config_file=True,
              default=None, help='Optional config file')

    flags.add('--run-dir', '-r', dest='run_dir', type=str, required=True,
              help='Fit folder holding manifest.json')

    flags.add('--data', dest='data', type=str, default=None,
              help='Panel csv, defaults to the manifest path')

    flags.add('--out-dir', '-o', dest='out_dir', type=str, default=None,
              help='Output folder, defaults to the fit folder')

    return flags.parse_args(args)


def print_arguments(args):

    print('\nArguments (models/diagnose.py):')
    print('\tRun: {0}'.format(args.run_dir))
    print('\tData: {0}'.format(args.data))
    print('\tOutput: {0}\n'.format(args.out_dir))


def acceptance_frame(manifest):
    rows = [(chain, block, rate)
            for chain, report in sorted(manifest['chains'].items())
            for block, rate in report['acceptance'].items()]
    return pd.DataFrame(rows, columns=['chain', 'block', 'rate'])


def diagnose(manifest, draws, data, out_dir):
    """Writes every diagnostic csv

    Returns:
    -------
    * report: dict
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    w = waic(draws.loglik)
    loo = psis_loo(draws.loglik)
    write_criteria(w, loo, out_dir / 'criteria.csv')
    write_pointwise(data, w, loo, out_dir / 'pointwise.csv')
    write_pareto_k_hist(loo.pareto_k, out_dir / 'pareto_k_hist.csv')
    acceptance_frame(manifest).to_csv(out_dir / 'acceptance.csv',
                                      index=False)

    report = {'waic': w.waic, 'waic_se': w.se, 'looic': loo.looic,
              'looic_se': loo.se, 'max_pareto_k': float(loo.pareto_k.max()),
              'notes': loo.notes}

    config = ModelConfig(**manifest['config'])
    if draws.num_draws > 1 and not config.single_cluster:
        check = posterior_mean_identity(draws, config)
        report['identity'] = check._asdict()
    return report


def main(args=None):
    flags = get_arguments(args)
    print_arguments(flags)

    started = time.time()
    manifest, draws, data = load_fit(flags.run_dir, flags.data)
    out_dir = flags.out_dir or flags.run_dir
    report = diagnose(manifest, draws, data, out_dir)
    record_timing(flags.run_dir,
                  diagnose_minutes=(time.time() - started) / 60)
    for key, value in report.items():
        print(f'\t{key}: {value}')
    return str(out_dir)


if __name__ == '__main__':
    main()
