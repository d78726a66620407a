"""Posterior predictive mixture densities"""
from collections import namedtuple

import numpy as np
from scipy.stats import norm

from arlbsg.core.errors import InvalidParameterError

PredictiveDensity = namedtuple('PredictiveDensity', 'grid mean lower upper')


def posterior_predictive(draws, data, t, grid, level=0.95):
    """Mixture density of a new observation at time t

        sum_k w_tk N(y; theta_k + xbar_t' beta + gammabar, sigma^2_k)

    evaluated for every retained draw, xbar_t and gammabar being the
    observed covariate mean at t and the mean spatial effect.

    Parameters:
    ----------
    * draws: PosteriorDraws

    * data: PanelDataset

    * t: int

    * grid: array-like<float>

    * level: float
        width of the pointwise band

    Returns:
    -------
    * density: PredictiveDensity
    """
    if not 0 <= t < draws.T:
        raise InvalidParameterError(f't must lie in [0, {draws.T}) got {t}')
    if draws.num_draws == 0:
        raise InvalidParameterError('posterior predictive needs draws')
    grid = np.asarray(grid, dtype=float)

    offset = draws.gamma.mean(axis=1)
    if data.p > 0:
        obs = data.observed[:, t]
        xbar = data.x[obs, t].mean(axis=0) if obs.any() else \
            np.zeros(data.p)
        offset = offset + draws.beta @ xbar

    loc = draws.theta + offset[:, None]
    scale = np.sqrt(draws.sigma_sq)
    dens = norm.pdf(grid[None, None, :], loc[:, :, None], scale[:, :, None])
    mixture = np.einsum('dk,dkg->dg', draws.weights[:, :, t], dens)

    tail = 0.5 * (1 - level)
    return PredictiveDensity(grid, mixture.mean(axis=0),
                             np.quantile(mixture, tail, axis=0),
                             np.quantile(mixture, 1 - tail, axis=0))
