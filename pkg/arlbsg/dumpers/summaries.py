"""Plot ready csv summaries of a fitted model"""
from pathlib import Path

import numpy as np
import pandas as pd

from arlbsg.core.posterior.criteria import pareto_k_histogram
from arlbsg.core.posterior.partitions import canonical_labels


def write_cocluster_matrices(stack, station_ids, out_dir,
                             prefix='cocluster'):
    """One n x n csv per time, `<prefix>_t<t>.csv` with 1-based t"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for t, matrix in enumerate(stack):
        frame = pd.DataFrame(matrix, index=list(station_ids),
                             columns=list(station_ids))
        frame.index.name = 'station_id'
        path = out_dir / f'{prefix}_t{t + 1}.csv'
        frame.to_csv(path)
        paths.append(path)
    return paths


def partitions_frame(series, station_ids, time_labels):
    """Long format (time, station_id, cluster) with 1-based clusters"""
    rows = []
    for t, labels in enumerate(np.asarray(series)):
        labels = canonical_labels(labels) + 1
        rows.extend((time_labels[t], sid, int(c))
                    for sid, c in zip(station_ids, labels))
    return pd.DataFrame(rows, columns=['time', 'station_id', 'cluster'])


def write_partitions(series, station_ids, time_labels, path):
    partitions_frame(series, station_ids, time_labels).to_csv(path,
                                                              index=False)
    return Path(path)


def write_lagged_ari(frame, path):
    frame.to_csv(path, index=False)
    return Path(path)


def criteria_frame(waic_result, loo_result):
    """Both criteria on the deviance scale plus their components"""
    rows = [
        ('waic', waic_result.waic, waic_result.se),
        ('lppd', float(np.sum(waic_result.lppd)), np.nan),
        ('p_waic', float(np.sum(waic_result.penalty)), np.nan),
        ('looic', loo_result.looic, loo_result.se),
        ('elpd_loo', float(np.sum(loo_result.elpd)), np.nan),
        ('max_pareto_k', float(np.max(loo_result.pareto_k)), np.nan),
    ]
    return pd.DataFrame(rows, columns=['criterion', 'value', 'se'])


def write_criteria(waic_result, loo_result, path):
    criteria_frame(waic_result, loo_result).to_csv(path, index=False)
    return Path(path)


def pointwise_frame(data, waic_result, loo_result):
    """Per observed cell contributions, cells in row-major order"""
    cells = data.observed_cells
    return pd.DataFrame({
        'cell': np.arange(1, len(cells) + 1),
        'station_id': [data.station_ids[i] for i in cells[:, 0]],
        'time': [data.time_labels[t] for t in cells[:, 1]],
        'waic_lppd': waic_result.lppd,
        'waic_penalty': waic_result.penalty,
        'loo_elpd': loo_result.elpd,
        'pareto_k': loo_result.pareto_k,
    })


def write_pointwise(data, waic_result, loo_result, path):
    pointwise_frame(data, waic_result, loo_result).to_csv(path, index=False)
    return Path(path)


def write_pareto_k_hist(pareto_k, path):
    bins, counts = pareto_k_histogram(pareto_k)
    pd.DataFrame({'bin': bins, 'count': counts}).to_csv(path, index=False)
    return Path(path)


def write_cluster_counts(frame, path):
    frame.to_csv(path, index=False)
    return Path(path)


def predictive_frame(densities, time_labels):
    """Long format (time, y, mean, lower, upper), one block per time"""
    frames = []
    for label, density in zip(time_labels, densities):
        frames.append(pd.DataFrame({
            'time': label,
            'y': density.grid,
            'mean': density.mean,
            'lower': density.lower,
            'upper': density.upper,
        }))
    return pd.concat(frames, ignore_index=True)


def write_predictive(densities, time_labels, path):
    predictive_frame(densities, time_labels).to_csv(path, index=False)
    return Path(path)
