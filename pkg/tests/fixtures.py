"""Small panels, configurations and draws shared by the tests"""
import os

import numpy as np

from arlbsg.core.chain import PosteriorDraws
from arlbsg.core.params import ModelConfig
from arlbsg.scenarios.base import ScenarioSpec, generate

# long running statistical checks
SLOW_TESTS = os.environ.get('ARLBSG_SLOW_TESTS', '0') not in ('', '0')


def small_scenario(n=8, T=5, p=1, seed=11, **kwargs):
    spec = ScenarioSpec(n=n, T=T, p=p, seed=seed, **kwargs)
    return generate(spec)


def small_config(**kwargs):
    params = {'H': 5, 'n_iter': 12, 'burn_in': 4, 'thin': 2, 'seed': 3}
    params.update(kwargs)
    return ModelConfig(**params)


def fake_draws(partitions, H=4, p=1):
    """PosteriorDraws holding `partitions` (D, n, T), zeros elsewhere"""
    s = np.asarray(partitions, dtype=np.int16)
    D, n, T = s.shape
    scalars = {name: np.ones(D)
               for name in ('alpha', 'psi', 'tau_sq', 'phi', 'rho_sq')}
    weights = np.full((D, H, T), 1.0 / H)
    return PosteriorDraws(
        s=s, theta=np.zeros((D, H)), sigma_sq=np.ones((D, H)),
        beta=np.zeros((D, p)), gamma=np.zeros((D, n)),
        loglik=np.full((D, n * T), -1.0), weights=weights, **scalars)
