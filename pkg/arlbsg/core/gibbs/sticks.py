"""Blocked updates of the logistic-beta sticks

    For every free stick k < H:
        1. xi_k(t) | eps_k(t) ~ PG(m_k(t), eps_k(t))
        2. lambda_k | xi_k, with eps_k integrated out, by Metropolis-Hastings
           with an independent Polya(a', b') proposal, a' + b' = 1 + alpha
        3. eps_k | lambda_k, xi_k ~ N_T(Q^-1 e, Q^-1)
        4. weights w_tk from the updated paths

Stick k (0-based) collects the cells whose membership is at least k.
"""
from collections import deque

import numpy as np
from scipy.optimize import brentq
from scipy.special import log_expit, polygamma

from arlbsg.core.distributions import ar1_correlation, ar1_kernel, \
    ar1_precision, mvn_log_density, polya_mean, sample_mvn_canonical, \
    sample_polya, sample_polya_gamma


class StickUpdateWorkspace:
    """Counts shared by the stick updates

    Attributes:
    ----------
    * r: numpy.array<int>  (H, T)
        r_k(t) = #{i observed: s_it = k}

    * m: numpy.array<int>  (H, T)
        m_k(t) = #{i observed: s_it >= k}

    * active: numpy.array<bool>  (H, T)
        m_k(t) > 0
    """

    def __init__(self, s, observed, H):
        T = s.shape[1]
        r = np.zeros((H, T), dtype=np.int64)
        for t in range(T):
            r[:, t] = np.bincount(s[observed[:, t], t], minlength=H)
        self.r = r
        self.m = np.cumsum(r[::-1], axis=0)[::-1]
        self.active = self.m > 0
        self._s = s
        self._observed = observed

    @classmethod
    def from_state(cls, state, data):
        return cls(state.s, data.observed, state.H)

    def index_set(self, k):
        """(i, t) pairs with s_it >= k"""
        return np.argwhere(self._observed & (self._s >= k))

    def kappa(self, k):
        """r_k(t) - 0.5 m_k(t), zero on inactive times"""
        return self.r[k] - 0.5 * self.m[k]

    def check(self, s, observed):
        other = StickUpdateWorkspace(s, observed, self.r.shape[0])
        return np.array_equal(self.r, other.r) and \
            np.array_equal(self.m, other.m)


def compute_weights(state):
    """w_tk = expit(eps_k(t)) prod_{l < k} (1 - expit(eps_l(t)))

        Computed in log space; the last weight absorbs the remaining mass.
    """
    H = state.H
    eps = state.eps[:H - 1]
    log_rest = np.vstack((np.zeros((1, eps.shape[1])),
                          np.cumsum(log_expit(-eps), axis=0)))
    weights = np.empty_like(state.eps)
    weights[:H - 1] = np.exp(log_expit(eps) + log_rest[:H - 1])
    weights[H - 1] = np.maximum(1.0 - weights[:H - 1].sum(axis=0), 0.0)
    state.weights = weights
    return state


def update_pg_augmentation(state, workspace, rng, exact_threshold=170):
    """xi_k(t) ~ PG(m_k(t), eps_k(t)) on active cells, zero elsewhere"""
    H = state.H
    active = workspace.active[:H - 1]
    xi = np.zeros_like(state.eps)
    if active.any():
        xi[:H - 1][active] = sample_polya_gamma(
            workspace.m[:H - 1][active], state.eps[:H - 1][active], rng,
            exact_threshold=exact_threshold)
    state.xi = xi
    return state


# ---------------------------------------------------------------------------
# lambda
# ---------------------------------------------------------------------------
def match_polya_moments(target, total):
    """Shapes (a', b') with a' + b' = total and Polya mean `target`

        The Polya mean decreases in a' over (0, total / 2]; targets below
        its minimum 2 trigamma(total / 2) get the symmetric proposal.

    Parameters:
    ----------
    * target: float
        positive running average of lambda_k

    * total: float
        1 + alpha

    Returns:
    -------
    * a, b: float
        a <= b
    """
    half = 0.5 * total
    if target <= 2 * polygamma(1, half):
        return half, half

    def gap(a):
        return polya_mean(a, total - a) - target

    lo = half * 1e-3
    while gap(lo) < 0 and lo > 1e-300:
        lo *= 1e-3
    a = brentq(gap, lo, half, xtol=1e-14, rtol=1e-12)
    return a, total - a


class MomentMatcher:
    """Running average of lambda_k over a sliding window

        Starts at the Polya(1, alpha) mean; `freeze` stops adaptation.
    """

    def __init__(self, num_sticks, window=50):
        self.window = deque(maxlen=window)
        self.num_sticks = num_sticks
        self.frozen = False
        self._frozen_targets = None

    def targets(self, alpha):
        if self._frozen_targets is not None:
            return self._frozen_targets
        if not self.window:
            return np.full(self.num_sticks, polya_mean(1.0, alpha))
        return np.mean(np.asarray(self.window), axis=0)

    def proposals(self, alpha):
        """(a', b') per stick, shape (num_sticks, 2)"""
        return np.array([match_polya_moments(lam, 1 + alpha)
                         for lam in self.targets(alpha)])

    def push(self, lam):
        if not self.frozen:
            self.window.append(np.array(lam[:self.num_sticks], dtype=float))

    def freeze(self, alpha):
        if not self.frozen:
            self._frozen_targets = self.targets(alpha)
            self.frozen = True

    def __getstate__(self):
        state = dict(self.__dict__)
        state['window'] = (list(self.window), self.window.maxlen)
        return state

    def __setstate__(self, state):
        items, maxlen = state.pop('window')
        self.__dict__.update(state)
        self.window = deque(items, maxlen=maxlen)


def lambda_log_marginal(lam, kappa, xi, correlation, alpha, jitter=1e-10):
    """log L(lambda) over the active times of a stick

        N(kappa / xi; 0.5 lambda (1 - alpha) 1, lambda Psi + diag(1 / xi))

    Parameters:
    ----------
    * kappa, xi: numpy.array<float>
        restricted to the active times

    * correlation: numpy.array<float>
        Psi restricted to the active times
    """
    if kappa.size == 0:
        return 0.0
    cov = lam * correlation + np.diag(1 / xi)
    mean = np.full(kappa.size, 0.5 * lam * (1 - alpha))
    return mvn_log_density(kappa / xi, mean, cov, jitter=jitter,
                           block='lambda')


def lambda_log_acceptance(lam, proposal, shapes, alpha, kappa, xi,
                          correlation, jitter=1e-10):
    """log of the Metropolis-Hastings ratio for lambda -> proposal

        0.5 (lambda - lambda*) (alpha - a' b') + log L(lambda*) - log L(lambda)
    """
    a, b = shapes
    out = 0.5 * (lam - proposal) * (alpha - a * b)
    out += lambda_log_marginal(proposal, kappa, xi, correlation, alpha, jitter)
    out -= lambda_log_marginal(lam, kappa, xi, correlation, alpha, jitter)
    return out


def _resolve_streams(rng, num):
    if isinstance(rng, np.random.Generator):
        return [rng] * num
    return list(rng)


def _map(fnc, items, pool):
    return list(pool.map(fnc, items)) if pool is not None else \
        [fnc(item) for item in items]


def update_lambda(state, workspace, shapes, rng, jitter=1e-10, pool=None):
    """Independence Metropolis-Hastings for every free lambda_k

    Parameters:
    ----------
    * shapes: numpy.array<float>
        (H - 1, 2) proposal shapes (a', b')

    * rng: numpy.random.Generator or sequence of generators
        one generator per stick when `pool` is given

    * pool: multiprocessing.pool.ThreadPool

    Returns:
    -------
    * state: ChainState

    * accepted: numpy.array<bool>
        (H - 1,)
    """
    H = state.H
    psi_corr = ar1_correlation(ar1_kernel(state.psi, state.eps.shape[1]))
    streams = _resolve_streams(rng, H - 1)

    def step(k):
        gen = streams[k]
        active = workspace.active[k]
        proposal = sample_polya(shapes[k][0], shapes[k][1], gen)
        log_ratio = lambda_log_acceptance(
            state.lam[k], proposal, shapes[k], state.alpha,
            workspace.kappa(k)[active], state.xi[k][active],
            psi_corr[np.ix_(active, active)], jitter)
        accept = np.log(gen.random()) < log_ratio
        return (proposal if accept else state.lam[k]), accept

    results = _map(step, range(H - 1), pool)
    accepted = np.zeros(H - 1, dtype=bool)
    for k, (lam, accept) in enumerate(results):
        state.lam[k] = lam
        accepted[k] = accept
    return state, accepted


# ---------------------------------------------------------------------------
# eps
# ---------------------------------------------------------------------------
def epsilon_posterior_params(k, state, workspace):
    """Canonical parameters of eps_k | rest

    Returns:
    -------
    * precision: numpy.array<float>
        diag(xi_k) + (lambda_k Psi)^-1

    * shift: numpy.array<float>
        kappa_k + 0.5 (1 - alpha) Psi^-1 1
    """
    T = state.eps.shape[1]
    psi_prec = ar1_precision(ar1_kernel(state.psi, T))
    active = workspace.active[k]
    xi = np.where(active, state.xi[k], 0.0)
    kappa = np.where(active, workspace.kappa(k), 0.0)
    precision = np.diag(xi) + psi_prec / state.lam[k]
    shift = kappa + 0.5 * (1 - state.alpha) * psi_prec.sum(axis=1)
    return precision, shift


def update_epsilon(state, workspace, rng, jitter=1e-10, pool=None):
    """Joint Gaussian draw of every free path eps_k, k < H - 1"""
    H = state.H
    streams = _resolve_streams(rng, H - 1)

    def step(k):
        precision, shift = epsilon_posterior_params(k, state, workspace)
        draw, _ = sample_mvn_canonical(shift, precision, streams[k],
                                       jitter=jitter, block='epsilon')
        return draw

    for k, draw in enumerate(_map(step, range(H - 1), pool)):
        state.eps[k] = draw
    return state
