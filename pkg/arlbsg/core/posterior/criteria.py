"""Predictive model comparison: WAIC and PSIS-LOO

Both criteria are reported on the deviance scale, lower is better.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy.special import logsumexp

from arlbsg.core.errors import InvalidParameterError, NumericalError

WAICResult = namedtuple('WAICResult', 'waic se lppd penalty')

LOOResult = namedtuple('LOOResult', 'looic se elpd pareto_k notes')

# share of the importance ratios in the Pareto tail
TAIL_FRACTION = 0.2
MIN_TAIL = 25
MIN_DRAWS = 100
PARETO_K_WARN = 0.7
PARETO_K_BINS = (-np.inf, 0.5, 0.7, 1.0, np.inf)


def _check_loglik(loglik):
    loglik = np.asarray(loglik, dtype=float)
    if loglik.ndim != 2 or loglik.shape[0] < 1:
        raise InvalidParameterError(
            f'loglik must be a draws x cells matrix got {loglik.shape}')
    bad = ~np.isfinite(loglik)
    if bad.any():
        d, cell = np.argwhere(bad)[0]
        raise NumericalError(f'nonfinite log-likelihood at cell {cell}',
                             cell=int(cell), draw=int(d))
    return loglik


def waic(loglik):
    """Watanabe-Akaike information criterion

    Parameters:
    ----------
    * loglik: numpy.array<float>
        (draws, cells) pointwise log-likelihood

    Returns:
    -------
    * result: WAICResult
        waic = -2 sum_i (lppd_i - penalty_i), its standard error and the
        pointwise lppd and penalty (sample variance) arrays
    """
    loglik = _check_loglik(loglik)
    draws, cells = loglik.shape
    lppd = logsumexp(loglik, axis=0) - np.log(draws)
    if draws > 1:
        penalty = np.var(loglik, axis=0, ddof=1)
    else:
        logging.warning('WAIC with a single draw: zero penalty')
        penalty = np.zeros(cells)
    pointwise = -2 * (lppd - penalty)
    se = float(np.sqrt(cells * np.var(pointwise))) if cells > 1 else 0.0
    return WAICResult(float(pointwise.sum()), se, lppd, penalty)


def gpd_fit(exceedances):
    """Probability weighted moments fit of a generalized Pareto law

        a0 = mean(x), a1 = mean((1 - p_j) x_(j)), p_j = (j - 0.35) / M
        shape = 2 - a0 / (a0 - 2 a1), scale = 2 a0 a1 / (a0 - 2 a1)

    Parameters:
    ----------
    * exceedances: numpy.array<float>
        positive values above the threshold

    Returns:
    -------
    * shape, scale: float
        shape > 0 means a heavy tail

    References:
    ----------
        Hosking and Wallis, Parameter and quantile estimation for the
        generalized Pareto distribution, 1987
    """
    x = np.sort(np.asarray(exceedances, dtype=float))
    M = x.size
    p = (np.arange(1, M + 1) - 0.35) / M
    a0 = x.mean()
    a1 = np.mean((1 - p) * x)
    denom = a0 - 2 * a1
    if not denom > 0:
        return np.inf, np.nan
    return float(2 - a0 / denom), float(2 * a0 * a1 / denom)


def gpd_quantile(probs, shape, scale):
    """Inverse CDF of the generalized Pareto law"""
    probs = np.asarray(probs, dtype=float)
    if abs(shape) < np.finfo(float).eps:
        return -scale * np.log1p(-probs)
    return scale * np.expm1(-shape * np.log1p(-probs)) / shape


def psis_smooth(log_ratios):
    """Pareto smoothed log importance weights of a single cell

    Returns:
    -------
    * log_weights: numpy.array<float>
        normalized

    * pareto_k: float

    * note: str or None
        set when the ratios are degenerate
    """
    lw = np.asarray(log_ratios, dtype=float)
    lw = lw - lw.max()
    D = lw.size
    tail = min(max(int(np.ceil(TAIL_FRACTION * D)), MIN_TAIL), D - 1)

    order = np.argsort(lw, kind='stable')
    cutoff = lw[order[-tail - 1]] if tail >= 1 else 0.0
    exceed = np.exp(lw[order[-tail:]]) - np.exp(cutoff) if tail >= 1 else \
        np.zeros(0)

    if tail < 5 or not np.any(exceed > 0):
        return lw - logsumexp(lw), 0.0, 'degenerate ratios: plain importance sampling'

    shape, scale = gpd_fit(exceed)
    if not np.isfinite(shape) or not scale > 0:
        return lw - logsumexp(lw), 0.0, 'Pareto fit failed: plain importance sampling'

    probs = (np.arange(1, tail + 1) - 0.5) / tail
    smoothed = np.log(np.exp(cutoff) + gpd_quantile(probs, shape, scale))
    lw = lw.copy()
    lw[order[-tail:]] = np.minimum(smoothed, 0.0)
    return lw - logsumexp(lw), shape, None


def psis_loo(loglik):
    """Pareto smoothed importance sampling leave-one-out

    Parameters:
    ----------
    * loglik: numpy.array<float>
        (draws, cells) pointwise log-likelihood

    Returns:
    -------
    * result: LOOResult
        looic = -2 sum_i elpd_i, its standard error, the pointwise elpd,
        the Pareto k of every cell and the notes raised on the way
    """
    loglik = _check_loglik(loglik)
    draws, cells = loglik.shape
    notes = []
    if draws < MIN_DRAWS:
        msg = f'PSIS-LOO with {draws} < {MIN_DRAWS} draws is unreliable'
        logging.warning(msg)
        notes.append(msg)

    elpd = np.empty(cells)
    pareto_k = np.empty(cells)
    degenerate = 0
    for i in range(cells):
        lw, pareto_k[i], note = psis_smooth(-loglik[:, i])
        elpd[i] = logsumexp(lw + loglik[:, i])
        degenerate += note is not None
    if degenerate:
        msg = f'{degenerate} cells with degenerate ratios used plain ' \
              'importance sampling'
        logging.info(msg)
        notes.append(msg)

    bad = int((pareto_k > PARETO_K_WARN).sum())
    if bad:
        msg = f'{bad} cells with Pareto k above {PARETO_K_WARN}'
        logging.warning(msg)
        notes.append(msg)

    pointwise = -2 * elpd
    se = float(np.sqrt(cells * np.var(pointwise))) if cells > 1 else 0.0
    return LOOResult(float(pointwise.sum()), se, elpd, pareto_k, notes)


def pareto_k_histogram(pareto_k):
    """Counts of Pareto k in the conventional bins

    Returns:
    -------
    * bins: list<str>

    * counts: numpy.array<int>
    """
    edges = PARETO_K_BINS
    pareto_k = np.asarray(pareto_k)
    labels = ['(-inf, 0.5]', '(0.5, 0.7]', '(0.7, 1]', '(1, inf)']
    counts = np.array([np.sum((pareto_k > lo) & (pareto_k <= hi))
                       for lo, hi in zip(edges[:-1], edges[1:])])
    return labels, counts
