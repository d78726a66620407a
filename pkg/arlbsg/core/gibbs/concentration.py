"""Conjugate update of the concentration alpha"""
import numpy as np

from arlbsg.core.distributions import sample_stirling_gamma
from arlbsg.core.params import StirlingGammaParams


def cluster_counts(s):
    """K_{n,t}: number of occupied clusters at every t, shape (T,)"""
    s = np.asarray(s)
    ordered = np.sort(s, axis=0)
    return 1 + (np.diff(ordered, axis=0) != 0).sum(axis=0)


def stirling_gamma_posterior(params, counts):
    """SG(a + sum_t K_t, b + T, m) given T partitions of m units"""
    a, b, m = params
    counts = np.asarray(counts)
    return StirlingGammaParams(a + float(counts.sum()), b + counts.size, m)


def draw_alpha(prior, counts, rng):
    """alpha | K_1, ..., K_T under the SG(a, b, m) prior"""
    return sample_stirling_gamma(stirling_gamma_posterior(prior, counts), rng)


def update_alpha(state, config, rng):
    prior = config.stirling_gamma(state.s.shape[0])
    state.alpha = draw_alpha(prior, cluster_counts(state.s), rng)
    return state
