"""Run manifests: enough to reproduce a fit bit for bit"""
import json
import os
import tempfile
from datetime import datetime
from pathlib import Path

import numpy as np

import arlbsg

MANIFEST = 'manifest.json'


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def build_manifest(config, data, chains, timing=None, **extra):
    """Manifest of a fit

    Parameters:
    ----------
    * config: ModelConfig
        the configuration as given (not resolved)

    * data: PanelDataset

    * chains: dict<str, dict>
        per chain reports: draws, acceptance, timing and metadata

    * timing: dict<str, float>
        minutes

    Returns:
    -------
    * manifest: dict
    """
    manifest = {
        'software': arlbsg.name,
        'version': arlbsg.__version__,
        'created': datetime.utcnow().isoformat(),
        'config': config.to_dict(),
        'seed': config.seed,
        'dataset': {'fingerprint': data.fingerprint, 'n': data.n,
                    'T': data.T, 'p': data.p, 'n_obs': data.n_obs},
        'chains': chains,
        'timing_minutes': dict(timing or {}),
    }
    manifest.update(extra)
    return _jsonable(manifest)


def write_manifest(manifest, out_dir, filename=MANIFEST):
    """Atomic write: temporary file in the target folder then os.replace"""
    out_dir = Path(out_dir)
    target = out_dir / filename
    fd, tmp_path = tempfile.mkstemp(dir=str(out_dir), suffix='.tmp')
    try:
        with os.fdopen(fd, 'w') as f:
            json.dump(_jsonable(manifest), f, indent=2, sort_keys=True)
        os.replace(tmp_path, target)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return target


def read_manifest(path):
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST
    with path.open('r') as f:
        return json.load(f)


# minutes merged by `record_timing` into postprocessing_minutes
POSTPROCESSING_STEPS = ('summarize_minutes', 'diagnose_minutes')


def record_timing(run_dir, **minutes):
    """Merges post-processing minutes into the manifest of a fit

        `postprocessing_minutes` is the sum of the POSTPROCESSING_STEPS
        recorded so far; sampling entries are left untouched.

    Returns:
    -------
    * path: pathlib.Path
    """
    manifest = read_manifest(run_dir)
    timing = manifest.setdefault('timing_minutes', {})
    timing.update(minutes)
    timing['postprocessing_minutes'] = sum(
        timing.get(key) or 0.0 for key in POSTPROCESSING_STEPS)
    run_dir = Path(run_dir)
    return write_manifest(manifest, run_dir.parent if run_dir.is_file()
                          else run_dir)
