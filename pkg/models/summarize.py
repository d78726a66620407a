"""Partition summaries of a fit

    Writes into the fit folder (or --out-dir):

        cocluster_t<t>.csv   posterior co-clustering probabilities
        partitions.csv       VI point estimates (time, station_id, cluster)
        lagged_ari.csv       lagged ARI of the point estimates
        cluster_counts.csv   posterior number of clusters per time
        predictive.csv       posterior predictive density per time
        draws.csv            scalar and vector parameters per draw
        recovery.csv         ARI against a ground truth (--truth only)

    The elapsed minutes are merged into the fit manifest (summarize_minutes).
"""
import time
from pathlib import Path

import configargparse
import numpy as np
import pandas as pd

from arlbsg.core.posterior.partitions import adjusted_rand_index, \
    cluster_count_summary, cocluster_error, cocluster_probs, \
    cocluster_stack, lagged_ari, lagged_ari_frame, vi_point_estimates
from arlbsg.core.posterior.predictive import posterior_predictive
from arlbsg.dumpers.draws import export_draws_csv
from arlbsg.dumpers.manifest import record_timing
from arlbsg.dumpers.summaries import write_cluster_counts, \
    write_cocluster_matrices, write_lagged_ari, write_partitions, \
    write_predictive
from arlbsg.loaders.panel import load_partitions_csv
from models.fit import load_fit


def get_arguments(args=None):

    flags = configargparse.ArgParser(
        ignore_unknown_config_file_keys=True,
        description="""
            Co-clustering probabilities, VI point partitions and lagged
            ARI of a fit folder written by `fit`.
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

    flags.add('--max-lag', dest='max_lag', type=int, default=12,
              help='Largest lag of the lagged ARI table')

    flags.add('--grid-points', dest='grid_points', type=int, default=100,
              help='Points of the posterior predictive grid')

    flags.add('--truth', dest='truth', type=str, default=None,
              help='Ground truth partitions csv (time, station_id, cluster)')

    return flags.parse_args(args)


def print_arguments(args):

    print('\nArguments (models/summarize.py):')
    print('\tRun: {0}'.format(args.run_dir))
    print('\tData: {0}'.format(args.data))
    print('\tOutput: {0}'.format(args.out_dir))
    print('\tMax lag: {0}'.format(args.max_lag))
    print('\tGrid points: {0}'.format(args.grid_points))
    print('\tTruth: {0}\n'.format(args.truth))


def recovery_frame(truth, estimate, stack, time_labels):
    """ARI per time against the truth and the co-clustering error"""
    ari = [adjusted_rand_index(truth[t], estimate[t])
           for t in range(truth.shape[0])]
    frame = pd.DataFrame({'time': list(time_labels), 'ari': ari})
    return frame, cocluster_error(cocluster_stack(truth), stack)


def predictive_grid(data, points=100):
    """Observed range widened by three standard deviations"""
    y = data.y[data.observed]
    pad = 3 * y.std() if y.size > 1 else 1.0
    pad = pad if pad > 0 else 1.0
    return np.linspace(y.min() - pad, y.max() + pad, points)


def summarize(draws, data, out_dir, max_lag=12, truth=None,
              grid_points=100):
    """Writes every summary csv

    Returns:
    -------
    * report: dict
        median ARI against the truth and co-clustering error when given
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    stack = cocluster_probs(draws)
    estimate = vi_point_estimates(draws, stack)
    write_cocluster_matrices(stack, data.station_ids, out_dir)
    write_partitions(estimate, data.station_ids, data.time_labels,
                     out_dir / 'partitions.csv')

    max_lag = min(max_lag, data.T - 1)
    write_lagged_ari(lagged_ari_frame(lagged_ari(estimate, max_lag),
                                      data.time_labels),
                     out_dir / 'lagged_ari.csv')
    write_cluster_counts(cluster_count_summary(draws, data.time_labels),
                         out_dir / 'cluster_counts.csv')
    export_draws_csv(draws, out_dir / 'draws.csv')

    grid = predictive_grid(data, grid_points)
    densities = [posterior_predictive(draws, data, t, grid)
                 for t in range(data.T)]
    write_predictive(densities, data.time_labels,
                     out_dir / 'predictive.csv')

    report = {'draws': draws.num_draws}
    if truth is not None:
        frame, error = recovery_frame(truth, estimate, stack,
                                      data.time_labels)
        frame.to_csv(out_dir / 'recovery.csv', index=False)
        report['median_ari'] = float(np.median(frame['ari']))
        report['cocluster_error'] = error
    return report


def main(args=None):
    flags = get_arguments(args)
    print_arguments(flags)

    started = time.time()
    _, draws, data = load_fit(flags.run_dir, flags.data)
    truth = None
    if flags.truth is not None:
        truth = load_partitions_csv(flags.truth, data)

    out_dir = flags.out_dir or flags.run_dir
    report = summarize(draws, data, out_dir, flags.max_lag, truth,
                       flags.grid_points)
    record_timing(flags.run_dir,
                  summarize_minutes=(time.time() - started) / 60)
    for key, value in report.items():
        print(f'\t{key}: {value}')
    return str(out_dir)


if __name__ == '__main__':
    main()
