"""Versioned little-endian binary storage of the retained draws

    magic   b'ARLBSGDR'
    version uint16
    length  uint32, size of the header
    header  utf-8 json with sorted keys: n, T, H, p, n_obs, store_latents
            and fields = [[name, dtype, shape], ...]
    records one fixed-size record per draw, fields in header order

Memberships are stored 1-based as uint16.
"""
import json
import struct
from pathlib import Path

import numpy as np
import pandas as pd

MAGIC = b'ARLBSGDR'

VERSION = 1

# draw attribute -> file field
FILE_NAMES = {'lam': 'lambda'}


def draw_layout(n, T, H, p, n_obs, store_latents):
    """[name, dtype, shape] of every record field, in file order"""
    fields = [
        ['s', '<u2', [n, T]],
        ['theta', '<f8', [H]],
        ['sigma_sq', '<f8', [H]],
        ['alpha', '<f8', []],
        ['psi', '<f8', []],
        ['beta', '<f8', [p]],
        ['gamma', '<f8', [n]],
        ['tau_sq', '<f8', []],
        ['phi', '<f8', []],
        ['rho_sq', '<f8', []],
        ['loglik', '<f8', [n_obs]],
        ['weights', '<f8', [H, T]],
    ]
    if store_latents:
        fields += [
            ['eps', '<f8', [H, T]],
            ['lambda', '<f8', [H]],
            ['xi', '<f8', [H, T]],
        ]
    return fields


def record_dtype(fields):
    return np.dtype([(name, dtype, tuple(shape))
                     for name, dtype, shape in fields])


def draws_header(draws):
    return {
        'n': draws.n, 'T': draws.T, 'H': draws.H, 'p': draws.p,
        'n_obs': int(draws.loglik.shape[1]),
        'store_latents': bool(draws.store_latents),
        'fields': draw_layout(draws.n, draws.T, draws.H, draws.p,
                              int(draws.loglik.shape[1]),
                              draws.store_latents),
    }


def write_draws(draws, path):
    """Writes PosteriorDraws in the binary format

    Parameters:
    ----------
    * draws: arlbsg.core.chain.PosteriorDraws

    * path: str or pathlib.Path

    Returns:
    -------
    * path: pathlib.Path
    """
    if draws.s.size and int(draws.s.max()) >= np.iinfo(np.uint16).max:
        raise ValueError('memberships do not fit in uint16')
    header = draws_header(draws)
    dtype = record_dtype(header['fields'])
    records = np.zeros(draws.num_draws, dtype=dtype)
    inverse = {v: k for k, v in FILE_NAMES.items()}
    for name, _, _ in header['fields']:
        values = getattr(draws, inverse.get(name, name))
        if name == 's':
            values = values.astype(np.int64) + 1
        records[name] = values

    payload = json.dumps(header, sort_keys=True).encode('utf-8')
    path = Path(path)
    with path.open('wb') as f:
        f.write(MAGIC)
        f.write(struct.pack('<HI', VERSION, len(payload)))
        f.write(payload)
        f.write(records.tobytes())
    return path


def export_draws_csv(draws, path):
    """Scalar and vector parameters, one row per draw

        Memberships are left to partitions.csv; vector fields are spread
        as `<name>_<index>` columns (1-based).
    """
    columns = {'draw': np.arange(1, draws.num_draws + 1)}
    for name in ('alpha', 'psi', 'tau_sq', 'phi', 'rho_sq'):
        columns[name] = getattr(draws, name)
    for name in ('theta', 'sigma_sq', 'beta', 'gamma'):
        values = getattr(draws, name)
        for j in range(values.shape[1]):
            columns[f'{name}_{j + 1}'] = values[:, j]
    columns['loglik'] = draws.loglik.sum(axis=1)
    frame = pd.DataFrame(columns)
    frame.to_csv(path, index=False)
    return Path(path)
