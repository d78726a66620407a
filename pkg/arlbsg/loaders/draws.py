"""Reads the binary draw files written by arlbsg.dumpers.draws"""
import json
import struct
from pathlib import Path

import numpy as np

from arlbsg.core.chain import PosteriorDraws
from arlbsg.core.errors import IngestionError
from arlbsg.dumpers.draws import FILE_NAMES, MAGIC, VERSION, record_dtype

PREAMBLE = struct.calcsize('<HI')

# file field -> draw attribute
ATTRIBUTES = {v: k for k, v in FILE_NAMES.items()}


def read_header(path):
    """Header dict and the offset of the first record"""
    with Path(path).open('rb') as f:
        magic = f.read(len(MAGIC))
        if magic != MAGIC:
            raise IngestionError(f'{path} is not a draw file')
        version, length = struct.unpack('<HI', f.read(PREAMBLE))
        if version != VERSION:
            raise IngestionError(
                f'{path}: unsupported draw format version {version}')
        header = json.loads(f.read(length).decode('utf-8'))
    return header, len(MAGIC) + PREAMBLE + length


def read_draws(path, metadata=None):
    """PosteriorDraws stored in `path`

    Parameters:
    ----------
    * path: str or pathlib.Path

    * metadata: dict
        attached to the draws, e.g the run manifest

    Returns:
    -------
    * draws: PosteriorDraws
        memberships back to 0-based
    """
    header, offset = read_header(path)
    dtype = record_dtype(header['fields'])
    raw = Path(path).read_bytes()[offset:]
    if len(raw) % dtype.itemsize:
        raise IngestionError(
            f'{path}: truncated draw file ({len(raw)} bytes of records, '
            f'record size {dtype.itemsize})')
    records = np.frombuffer(raw, dtype=dtype)

    arrays = {}
    for name, _, _ in header['fields']:
        values = np.array(records[name])
        if name == 's':
            values = values.astype(np.int16) - 1
        else:
            values = values.astype(float)
        arrays[ATTRIBUTES.get(name, name)] = values
    return PosteriorDraws(metadata=metadata, **arrays)


def _segment_order(path):
    # draws.bin first, then the resumed segments by starting iteration
    stem = path.stem
    return 0 if stem == 'draws' else int(stem.rsplit('_', 1)[-1]) + 1


def chain_segments(chain_dir):
    """Draw files of a chain folder in sampling order"""
    return sorted(Path(chain_dir).glob('draws*.bin'), key=_segment_order)


def read_fit_draws(run_dir):
    """Manifest and pooled draws of every chain of a fit folder

    Returns:
    -------
    * manifest: dict

    * draws: PosteriorDraws
    """
    from arlbsg.dumpers.manifest import read_manifest

    run_dir = Path(run_dir)
    manifest = read_manifest(run_dir)
    pooled = []
    for name in sorted(manifest['chains'],
                       key=lambda s: int(s.rsplit('_', 1)[-1])):
        segments = [read_draws(p) for p in chain_segments(run_dir / name)]
        if not segments:
            raise IngestionError(f'no draw files in {run_dir / name}')
        pooled.extend(segments)
    draws = PosteriorDraws.concatenate(pooled)
    draws.metadata['chains'] = len(manifest['chains'])
    return manifest, draws
