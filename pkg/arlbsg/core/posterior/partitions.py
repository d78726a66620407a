"""Label invariant summaries of the sampled partitions

    * co-clustering probabilities per time
    * point partitions minimizing the expected variation of information
    * (lagged) adjusted Rand index
"""
import numpy as np
import pandas as pd
from scipy.special import comb

from arlbsg.core.errors import InvalidParameterError

# minimal strict improvement accepted by the hill climbing
VI_TOL = 1e-12


def canonical_labels(labels):
    """Relabels a partition so every cluster carries its smallest member index

    Parameters:
    ----------
    * labels: array-like<int>
        (n,) arbitrary cluster labels

    Returns:
    -------
    * canonical: numpy.array<int>
        (n,) 0-based canonical labels
    """
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True,
                                  return_inverse=True)
    return first[inverse.ravel()]


def cocluster_matrix(labels):
    """0/1 co-clustering matrix of a single partition"""
    labels = np.asarray(labels)
    return (labels[:, None] == labels[None, :]).astype(float)


def cocluster_stack(series):
    """(T, n, n) co-clustering matrices of a (T, n) partition series"""
    return np.array([cocluster_matrix(labels) for labels in series])


def cocluster_probs(draws):
    """Posterior co-clustering probabilities

    Parameters:
    ----------
    * draws: PosteriorDraws

    Returns:
    -------
    * stack: numpy.array<float>
        (T, n, n); entry (t, i, j) is the fraction of draws with
        s_it = s_jt
    """
    D, n, T = draws.s.shape
    stack = np.empty((T, n, n))
    for t in range(T):
        labels = draws.s[:, :, t].astype(np.int64)
        onehot = np.zeros((D, n, labels.max() + 1), dtype=np.int64)
        np.put_along_axis(onehot, labels[:, :, None], 1, axis=2)
        counts = np.einsum('dik,djk->ij', onehot, onehot)
        stack[t] = counts / D
    return stack


def expected_vi_lower_bound(labels, cocluster):
    """Lower bound of the posterior expected VI between `labels` and the
    sampled partitions

        (1/n) sum_i [ log2 |C(i)| - 2 log2 sum_{j in C(i)} P_ij
                      + log2 sum_j P_ij ]

    It vanishes when every draw shares the partition `labels`.
    """
    same = np.asarray(labels)[:, None] == np.asarray(labels)[None, :]
    sizes = same.sum(axis=1)
    mass = (same * cocluster).sum(axis=1)
    total = cocluster.sum(axis=1)
    return float(np.mean(np.log2(sizes) - 2 * np.log2(mass) + np.log2(total)))


def _hill_climb(labels, cocluster):
    """Single unit reallocations while the objective strictly decreases"""
    labels = canonical_labels(labels)
    best = expected_vi_lower_bound(labels, cocluster)
    n = labels.size
    improved = True
    while improved:
        improved = False
        for i in range(n):
            options = list(np.unique(labels[labels != labels[i]]))
            if np.sum(labels == labels[i]) > 1:
                options.append(labels.max() + 1)
            for option in options:
                candidate = labels.copy()
                candidate[i] = option
                value = expected_vi_lower_bound(candidate, cocluster)
                if value < best - VI_TOL:
                    labels, best = canonical_labels(candidate), value
                    improved = True
                    break
    return labels, best


def vi_point_estimate(draws, t, cocluster=None):
    """Point partition at time t minimizing the expected VI lower bound

        Candidates are the distinct retained partitions; the best one (ties
        broken by the lexicographic order of canonical labels) seeds a
        greedy hill climbing over single unit moves.

    Parameters:
    ----------
    * draws: PosteriorDraws

    * t: int

    * cocluster: numpy.array<float>
        (n, n) co-clustering probabilities at t, computed if omitted

    Returns:
    -------
    * labels: numpy.array<int>
        (n,) canonical labels

    * objective: float
    """
    partitions = draws.partitions(t)
    if cocluster is None:
        cocluster = cocluster_probs_at(partitions)

    candidates = np.unique(
        np.array([canonical_labels(p) for p in partitions]), axis=0)
    values = [expected_vi_lower_bound(c, cocluster) for c in candidates]
    # np.unique sorts rows lexicographically: argmin keeps the first tie
    start = candidates[int(np.argmin(values))]
    return _hill_climb(start, cocluster)


def cocluster_probs_at(partitions):
    """(n, n) co-clustering probabilities from (D, n) partitions"""
    partitions = np.asarray(partitions)
    return np.mean(partitions[:, :, None] == partitions[:, None, :], axis=0)


def vi_point_estimates(draws, stack=None):
    """(T, n) series of VI point partitions"""
    if stack is None:
        stack = cocluster_probs(draws)
    return np.array([vi_point_estimate(draws, t, stack[t])[0]
                     for t in range(draws.T)])


def adjusted_rand_index(first, second):
    """Pair counting adjusted Rand index

        Identical partitions without informative pairs (n < 2 or all
        singletons vs all singletons) score 1.
    """
    first = canonical_labels(first)
    second = canonical_labels(second)
    _, a = np.unique(first, return_inverse=True)
    _, b = np.unique(second, return_inverse=True)
    table = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(table, (a.ravel(), b.ravel()), 1)

    index = comb(table, 2).sum()
    rows = comb(table.sum(axis=1), 2).sum()
    cols = comb(table.sum(axis=0), 2).sum()
    pairs = comb(first.size, 2)
    expected = rows * cols / pairs if pairs > 0 else 0.0
    maximum = 0.5 * (rows + cols)
    if maximum == expected:
        return 1.0 if np.array_equal(first, second) else 0.0
    return float((index - expected) / (maximum - expected))


def lagged_ari(series, max_lag):
    """ARI between partitions l steps apart

    Parameters:
    ----------
    * series: numpy.array<int>
        (T, n) partitions

    * max_lag: int
        0 <= max_lag < T

    Returns:
    -------
    * table: numpy.array<float>
        (max_lag + 1, T); entry (l, t) = ARI(series[t], series[t + l]),
        NaN when t + l >= T
    """
    series = np.asarray(series)
    T = series.shape[0]
    if not 0 <= max_lag < T:
        raise InvalidParameterError(
            f'max_lag must satisfy 0 <= max_lag < T={T} got {max_lag}')
    table = np.full((max_lag + 1, T), np.nan)
    for lag in range(max_lag + 1):
        for t in range(T - lag):
            table[lag, t] = adjusted_rand_index(series[t], series[t + lag])
    return table


def lagged_ari_frame(table, time_labels=None):
    """Long format (lag, time, ari) of a lagged ARI table"""
    lags, T = table.shape
    if time_labels is None:
        time_labels = [str(t + 1) for t in range(T)]
    rows = [(lag, time_labels[t], table[lag, t])
            for lag in range(lags) for t in range(T)
            if np.isfinite(table[lag, t])]
    return pd.DataFrame(rows, columns=['lag', 'time', 'ari'])


def cocluster_error(truth, estimate):
    """(1/T) sum_t ||C_t - C^_t||_F"""
    truth = np.asarray(truth, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if truth.shape != estimate.shape or truth.ndim != 3:
        raise InvalidParameterError(
            f'co-clustering stacks must match got {truth.shape} '
            f'and {estimate.shape}')
    return float(np.mean(np.linalg.norm(truth - estimate, axis=(1, 2))))


def cluster_count_summary(draws, time_labels=None):
    """Posterior mean and quantiles of K_{n,t} per time"""
    from arlbsg.core.gibbs.concentration import cluster_counts

    counts = np.array([cluster_counts(s) for s in draws.s])
    T = draws.T
    if time_labels is None:
        time_labels = [str(t + 1) for t in range(T)]
    return pd.DataFrame({
        'time': list(time_labels),
        'mean': counts.mean(axis=0),
        'q025': np.quantile(counts, 0.025, axis=0),
        'median': np.median(counts, axis=0),
        'q975': np.quantile(counts, 0.975, axis=0),
    })
