"""Latent state of a single chain"""
import copy
import logging

import numpy as np

from arlbsg.core.distributions import sample_polya, sample_stirling_gamma
from arlbsg.core.errors import NumericalError
from arlbsg.utils.serialize import Serializer

LOG_2PI = np.log(2 * np.pi)

# number of initial quantile groups
INIT_GROUPS = 5


class ChainState(Serializer):
    """Every latent quantity of the model

    Memberships `s` are 0-based in memory (0 .. H - 1); files use 1-based
    labels. Row H - 1 of `eps`, `lam` and `xi` is never sampled: its
    stick is forced to one.

    Attributes:
    ----------
    * s: numpy.array<int>  (n, T)
    * theta, sigma_sq: numpy.array<float>  (H,)  atoms
    * eps: numpy.array<float>  (H, T)  logistic-beta paths
    * lam: numpy.array<float>  (H,)  Polya mixing variables
    * xi: numpy.array<float>  (H, T)  Polya-gamma augmentation
    * weights: numpy.array<float>  (H, T)  derived from eps
    * alpha, psi, tau_sq, phi, rho_sq: float
    * beta: numpy.array<float>  (p,)
    * gamma: numpy.array<float>  (n,)
    * iteration: int  sweeps completed
    """

    def __init__(self, s, theta, sigma_sq, eps, lam, xi, weights, alpha,
                 psi, beta, gamma, tau_sq, phi, rho_sq, iteration=0):
        self.s = np.asarray(s, dtype=np.int64)
        self.theta = np.asarray(theta, dtype=float)
        self.sigma_sq = np.asarray(sigma_sq, dtype=float)
        self.eps = np.asarray(eps, dtype=float)
        self.lam = np.asarray(lam, dtype=float)
        self.xi = np.asarray(xi, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.alpha = float(alpha)
        self.psi = float(psi)
        self.beta = np.asarray(beta, dtype=float)
        self.gamma = np.asarray(gamma, dtype=float)
        self.tau_sq = float(tau_sq)
        self.phi = float(phi)
        self.rho_sq = float(rho_sq)
        self.iteration = int(iteration)
        # resume bookkeeping, filled in by the chain runner
        self.rng_state = None
        self.lambda_window = None

    @property
    def H(self):
        return self.theta.shape[0]

    def copy(self):
        return copy.deepcopy(self)

    def occupied(self, observed=None):
        """Boolean (H,) mask of clusters holding at least one cell"""
        s = self.s if observed is None else self.s[observed]
        return np.bincount(s.ravel(), minlength=self.H) > 0

    def check(self):
        """Lists violated state invariants"""
        violations = []
        if not np.allclose(self.weights.sum(axis=0), 1.0, rtol=0, atol=1e-10):
            violations.append('weights are off the simplex')
        if np.any(self.weights < 0):
            violations.append('negative weights')
        for name in ('sigma_sq', 'lam'):
            if np.any(getattr(self, name) <= 0):
                violations.append(f'{name} must be positive')
        for name in ('alpha', 'tau_sq', 'phi', 'rho_sq'):
            if not getattr(self, name) > 0:
                violations.append(f'{name} must be positive')
        if not -1 < self.psi < 1:
            violations.append(f'psi must lie in (-1, 1) got {self.psi}')
        if self.s.min() < 0 or self.s.max() >= self.H:
            violations.append('memberships out of range')
        return violations

    def __repr__(self):
        return (f'ChainState(iteration={self.iteration}, H={self.H}, '
                f'alpha={self.alpha:.4g}, psi={self.psi:.4g}, '
                f'occupied={int(self.occupied().sum())})')


def quantile_memberships(data, groups):
    """Bins y at every t into at most `groups` quantile groups"""
    s = np.zeros((data.n, data.T), dtype=np.int64)
    if groups < 2:
        return s
    probs = np.linspace(0, 1, groups + 1)[1:-1]
    for t in range(data.T):
        obs = data.observed[:, t]
        if not obs.any():
            continue
        edges = np.unique(np.quantile(data.y[obs, t], probs))
        s[obs, t] = np.digitize(data.y[obs, t], edges)
    # a constant panel lands entirely in bin 1
    if data.observed.any():
        s[data.observed] -= s[data.observed].min()
    return s


def init_state(config, data, rng):
    """Initial chain state

    Parameters:
    ----------
    * config: ModelConfig
        resolved (base_theta0 and base_sigma0_sq set)

    * data: PanelDataset

    * rng: numpy.random.Generator

    Returns:
    -------
    * state: ChainState
    """
    from arlbsg.core.gibbs.atoms import draw_base_measure, update_atoms
    from arlbsg.core.gibbs.sticks import compute_weights

    H, n, T = config.H, data.n, data.T

    if config.single_cluster:
        s = np.zeros((n, T), dtype=np.int64)
    else:
        s = quantile_memberships(data, min(INIT_GROUPS, H))

    theta, sigma_sq = draw_base_measure(config, rng, size=H)

    if config.single_cluster:
        alpha = config.sg_a / config.sg_b
    else:
        alpha = sample_stirling_gamma(config.stirling_gamma(n), rng)

    lam = np.ones(H)
    eps = np.zeros((H, T))
    if H > 1:
        lam[:-1] = sample_polya(1.0, alpha, rng, size=H - 1)
        # prior draw with psi = 0
        eps[:-1] = 0.5 * lam[:-1, None] * (1 - alpha) + \
            np.sqrt(lam[:-1, None]) * rng.standard_normal((H - 1, T))

    positive = data.dist[data.dist > 0]
    phi = float(np.median(positive)) if positive.size else 1.0

    state = ChainState(
        s=s, theta=theta, sigma_sq=sigma_sq, eps=eps, lam=lam,
        xi=np.zeros((H, T)), weights=np.zeros((H, T)), alpha=alpha,
        psi=0.0, beta=np.zeros(data.p), gamma=np.zeros(n), tau_sq=1.0,
        phi=phi, rho_sq=config.rho_sq)

    if config.single_cluster:
        state.weights[0] = 1.0
    else:
        compute_weights(state)

    update_atoms(state, data, config, rng)
    logging.info(f'initial state: {state}')
    return state


def cell_means(state, data):
    """mu_it = theta_{s_it} + x_it' beta + gamma_i"""
    mu = state.theta[state.s] + state.gamma[:, None]
    if data.p > 0:
        mu = mu + data.x @ state.beta
    return mu


def log_likelihood(state, data):
    """Gaussian log-likelihood over the observed cells

    Parameters:
    ----------
    * state: ChainState

    * data: PanelDataset

    Returns:
    -------
    * total: float

    * cells: numpy.array<float>
        (n, T) per-cell log densities, zero on unobserved cells

    Raises:
    ------
    * NumericalError
        naming the first cell with a nonfinite value
    """
    mu = cell_means(state, data)
    var = state.sigma_sq[state.s]
    resid = data.y_filled - mu
    cells = -0.5 * (LOG_2PI + np.log(var) + resid ** 2 / var)
    cells = np.where(data.observed, cells, 0.0)

    bad = ~np.isfinite(cells)
    if bad.any():
        i, t = np.argwhere(bad)[0]
        raise NumericalError(
            f'nonfinite log-likelihood at cell ({i}, {t})',
            cell=(int(i), int(t)), station_id=data.station_ids[i],
            time=data.time_labels[t])
    return float(cells.sum()), cells


def pointwise_log_likelihood(state, data):
    """Per observed cell log-likelihood, row-major over (i, t)"""
    _, cells = log_likelihood(state, data)
    return cells[data.observed]
