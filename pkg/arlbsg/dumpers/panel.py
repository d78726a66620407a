"""Writes panels (and synthetic ground truth) in the long csv format"""
from pathlib import Path

import numpy as np
import pandas as pd

from arlbsg.dumpers.summaries import write_cocluster_matrices, \
    write_partitions

TRUTH_PARTITIONS = 'truth_partitions.csv'

TRUTH_EFFECTS = 'truth_effects.csv'


def panel_frame(data):
    """Long format DataFrame, the inverse of load_panel_csv"""
    n, T = data.n, data.T
    i, t = np.divmod(np.arange(n * T), T)
    columns = {
        'station_id': [data.station_ids[k] for k in i],
        'time': [data.time_labels[k] for k in t],
        'y': np.where(data.observed[i, t], data.y[i, t], np.nan),
        'lat': data.coords[i, 0],
        'lon': data.coords[i, 1],
    }
    for j, name in enumerate(data.covariate_names):
        columns[name] = data.x[i, t, j]
    return pd.DataFrame(columns)


def write_panel_csv(data, path):
    """Writes every (station, time) cell, an empty y marks unobserved

    Parameters:
    ----------
    * data: PanelDataset

    * path: str or pathlib.Path

    Returns:
    -------
    * path: pathlib.Path
    """
    panel_frame(data).to_csv(path, index=False, na_rep='')
    return Path(path)


def write_truth(truth, data, out_dir):
    """Ground truth partitions, co-clustering matrices and effects"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_partitions(truth.partitions, data.station_ids, data.time_labels,
                     out_dir / TRUTH_PARTITIONS)
    write_cocluster_matrices(truth.cocluster, data.station_ids,
                             out_dir / 'truth_cocluster', prefix='cocluster')

    effects = [('beta', name, value)
               for name, value in zip(data.covariate_names, truth.beta)]
    effects += [('gamma', sid, value)
                for sid, value in zip(data.station_ids, truth.gamma)]
    pd.DataFrame(effects, columns=['parameter', 'label', 'value']).to_csv(
        out_dir / TRUTH_EFFECTS, index=False)
    return out_dir
