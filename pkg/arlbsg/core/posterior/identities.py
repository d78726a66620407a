"""Self consistency checks of a fitted model

    * posterior mean identity of the expected number of clusters
    * successive conditional (joint distribution) tests of the sweep and
      of the concentration update
"""
import logging
from collections import namedtuple

import numpy as np

from arlbsg.core.distributions import ar1_correlation, ar1_kernel, \
    sample_polya, sample_stirling_gamma
from arlbsg.core.gibbs.atoms import draw_base_measure
from arlbsg.core.gibbs.concentration import cluster_counts, draw_alpha
from arlbsg.core.gibbs.spatial import spatial_correlation
from arlbsg.core.gibbs.sticks import compute_weights
from arlbsg.core.panel import PanelDataset
from arlbsg.core.state import ChainState, cell_means

IdentityCheck = namedtuple('IdentityCheck', 'lhs rhs se ok')

GewekeSamples = namedtuple('GewekeSamples',
                           'psi tau_sq alpha prior_psi prior_tau_sq')

AlphaSamples = namedtuple('AlphaSamples', 'alpha prior_alpha')


def expected_clusters(alpha, n):
    """E[K_n | alpha] = sum_{i=1}^n alpha / (alpha + i - 1)"""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    i = np.arange(n)
    return (alpha[:, None] / (alpha[:, None] + i[None, :])).sum(axis=1)


def posterior_mean_identity(draws, config, num_se=3.0):
    """Checks E[E[K_n | alpha] | data] = b/(b+T) a/b + T/(b+T) Kbar_n

        Per draw, the left side uses alpha and the right side the same
        draw's partitions; the mean difference must lie within `num_se`
        standard errors of zero.

    Parameters:
    ----------
    * draws: PosteriorDraws

    * config: ModelConfig

    Returns:
    -------
    * check: IdentityCheck
    """
    a, b = config.sg_a, config.sg_b
    n, T = draws.n, draws.T
    lhs = expected_clusters(draws.alpha, n)
    kbar = np.array([cluster_counts(s).mean() for s in draws.s])
    rhs = b / (b + T) * (a / b) + T / (b + T) * kbar

    diff = lhs - rhs
    D = diff.size
    se = float(np.std(diff, ddof=1) / np.sqrt(D)) if D > 1 else float('nan')
    gap = abs(float(diff.mean()))
    ok = gap <= num_se * se if se > 0 else gap < 1e-10
    return IdentityCheck(float(lhs.mean()), float(rhs.mean()), se, bool(ok))


def draw_prior_state(config, data, alpha, rng):
    """Draws every latent quantity from the prior, alpha given"""
    H, n, T = config.H, data.n, data.T
    psi = rng.uniform(-1, 1)

    lam = np.ones(H)
    eps = np.zeros((H, T))
    lam[:-1] = sample_polya(1.0, alpha, rng, size=H - 1)
    chol = np.linalg.cholesky(ar1_correlation(ar1_kernel(psi, T)))
    z = rng.standard_normal((H - 1, T)) @ chol.T
    eps[:-1] = 0.5 * lam[:-1, None] * (1 - alpha) + \
        np.sqrt(lam[:-1, None]) * z

    theta, sigma_sq = draw_base_measure(config, rng, size=H)
    rho_sq = config.b_rho / rng.gamma(config.a_rho) \
        if config.estimate_rho_sq else config.rho_sq
    beta = np.sqrt(rho_sq) * rng.standard_normal(data.p)
    phi = rng.gamma(config.a_phi, 1 / config.b_phi)
    tau_sq = config.b_tau / rng.gamma(config.a_tau)
    corr = spatial_correlation(data.dist, phi, config.gp_nugget)
    gamma = np.linalg.cholesky(tau_sq * corr) @ rng.standard_normal(n)

    state = ChainState(
        s=np.zeros((n, T), dtype=np.int64), theta=theta, sigma_sq=sigma_sq,
        eps=eps, lam=lam, xi=np.zeros((H, T)), weights=np.zeros((H, T)),
        alpha=alpha, psi=psi, beta=beta, gamma=gamma, tau_sq=tau_sq,
        phi=phi, rho_sq=rho_sq)
    compute_weights(state)

    cdf = np.cumsum(state.weights, axis=0)
    u = rng.random((n, T)) * cdf[-1][None, :]
    state.s = np.minimum((cdf[None, :, :] <= u[:, None, :]).sum(axis=1),
                         H - 1)
    return state


def regenerate_panel(state, data, rng):
    """y ~ p(y | state) keeping covariates and locations"""
    mu = cell_means(state, data)
    y = mu + np.sqrt(state.sigma_sq[state.s]) * \
        rng.standard_normal(mu.shape)
    return PanelDataset(y, x=data.x, coords=data.coords, dist=data.dist)


def geweke_test(config, n, T, sweeps, rng, p=1, thin=1):
    """Successive conditional simulation of the joint distribution

        A prior draw seeds the chain; every sweep is followed by a fresh
        panel drawn from the observation model. Under a correct sweep the
        recorded psi and tau^2 follow their priors. alpha is drawn once
        from its prior and held fixed: its conjugate update conditions on
        the partitions alone and is checked by `alpha_joint_test`.

    Parameters:
    ----------
    * config: ModelConfig
        base_theta0 and base_sigma0_sq default to 0 and 1

    * n, T: int
        panel size

    * sweeps: int

    * rng: numpy.random.Generator

    * p: int
        number of covariates

    * thin: int

    Returns:
    -------
    * samples: GewekeSamples
        chain draws plus as many independent prior draws
    """
    from arlbsg.core.chain import Chain

    config = config.replace(
        base_theta0=0.0 if config.base_theta0 is None else config.base_theta0,
        base_sigma0_sq=1.0 if config.base_sigma0_sq is None
        else config.base_sigma0_sq)

    coords = np.column_stack((rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)))
    x = rng.random((n, T, p))
    data = PanelDataset(np.zeros((n, T)), x=x, coords=coords)

    alpha = sample_stirling_gamma(config.stirling_gamma(n), rng)
    state = draw_prior_state(config, data, alpha, rng)
    data = regenerate_panel(state, data, rng)

    chain = Chain(config, data, state=state, show_progress=False,
                  skip_blocks=('alpha',))
    chain.matcher.freeze(alpha)

    psi, tau_sq = [], []
    for sweep in range(1, sweeps + 1):
        chain.sweep(sweep)
        if sweep % thin == 0:
            psi.append(chain.state.psi)
            tau_sq.append(chain.state.tau_sq)
        chain.data = regenerate_panel(chain.state, chain.data, rng)

    num = len(psi)
    prior_psi = rng.uniform(-1, 1, num)
    prior_tau_sq = config.b_tau / rng.gamma(config.a_tau, size=num)
    logging.info(f'joint distribution test: {num} samples, alpha={alpha:.4g}')
    return GewekeSamples(np.array(psi), np.array(tau_sq), alpha,
                         prior_psi, prior_tau_sq)


def alpha_joint_test(config, n, T, sweeps, rng):
    """Successive conditional simulation of (alpha, K_1, ..., K_T)

        Given alpha, T partitions of n units are seated by a Chinese
        restaurant process; alpha is then redrawn by the sampler's own
        conjugate update. Under a correct update the recorded alpha follow
        the SG(a, b, n) prior.

    Parameters:
    ----------
    * config: ModelConfig

    * n, T: int
        panel size

    * sweeps: int

    * rng: numpy.random.Generator

    Returns:
    -------
    * samples: AlphaSamples
        chain draws plus as many independent prior draws
    """
    from arlbsg.scenarios.base import simulate_crp_cluster_counts

    prior = config.stirling_gamma(n)
    alpha = sample_stirling_gamma(prior, rng)
    out = np.empty(sweeps)
    for sweep in range(sweeps):
        counts = simulate_crp_cluster_counts(np.full(T, alpha), n, rng)
        alpha = draw_alpha(prior, counts, rng)
        out[sweep] = alpha
    logging.info(f'alpha joint distribution test: {sweeps} samples')
    return AlphaSamples(out, sample_stirling_gamma(prior, rng, size=sweeps))
