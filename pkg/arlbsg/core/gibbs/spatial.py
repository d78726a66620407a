"""Spatial random effects gamma ~ N_n(0, tau^2 R(phi))

    R(phi)_{ii'} = exp(-d_{ii'}^2 / (2 phi^2)), plus a nugget on the diagonal
"""
import numpy as np
from scipy import linalg

from arlbsg.core.distributions import safe_cholesky, sample_mvn_canonical


def spatial_correlation(dist, phi, nugget=0.0):
    """Squared exponential correlation matrix"""
    dist = np.asarray(dist, dtype=float)
    return np.exp(-dist ** 2 / (2 * phi ** 2)) + nugget * np.eye(dist.shape[0])


def gamma_posterior_params(state, data, config):
    """Canonical parameters of gamma | rest

        precision = (tau^2 R)^-1 + diag(sum_t 1 / sigma^2_{s_it})
        shift_i = sum_t (y_it - theta_{s_it} - x_it' beta) / sigma^2_{s_it}
    """
    corr = spatial_correlation(data.dist, state.phi, config.gp_nugget)
    chol = safe_cholesky(corr, config.jitter, block='spatial')
    corr_inv = linalg.cho_solve((chol, True), np.eye(data.n))

    w = np.where(data.observed, 1 / state.sigma_sq[state.s], 0.0)
    resid = data.y_filled - state.theta[state.s]
    if data.p > 0:
        resid = resid - data.x @ state.beta
    precision = corr_inv / state.tau_sq + np.diag(w.sum(axis=1))
    shift = (w * resid).sum(axis=1)
    return precision, shift


def tau_sq_posterior_params(gamma, corr, config):
    """IG(a_tau + n / 2, b_tau + gamma' R^-1 gamma / 2)"""
    gamma = np.asarray(gamma, dtype=float)
    chol = safe_cholesky(corr, config.jitter, block='spatial')
    z = linalg.solve_triangular(chol, gamma, lower=True)
    return config.a_tau + 0.5 * gamma.size, config.b_tau + 0.5 * z @ z


def phi_log_target(phi, gamma, tau_sq, dist, config):
    """log N(gamma; 0, tau^2 R(phi)) + log Ga(phi; a_phi, b_phi) + log phi

        The last term is the Jacobian of the log(phi) random walk.
    """
    corr = spatial_correlation(dist, phi, config.gp_nugget)
    chol = safe_cholesky(corr, config.jitter, block='spatial')
    z = linalg.solve_triangular(chol, gamma, lower=True)
    n = gamma.size
    log_lik = -0.5 * (n * np.log(2 * np.pi * tau_sq) + z @ z / tau_sq) - \
        np.log(np.diag(chol)).sum()
    log_prior = (config.a_phi - 1) * np.log(phi) - config.b_phi * phi
    return log_lik + log_prior + np.log(phi)


def update_spatial(state, data, config, rng):
    """gamma, then tau^2, then phi by random walk on log(phi)

    Returns:
    -------
    * state: ChainState

    * accepted: bool
        whether the phi proposal was accepted
    """
    precision, shift = gamma_posterior_params(state, data, config)
    state.gamma, _ = sample_mvn_canonical(shift, precision, rng,
                                          jitter=config.jitter,
                                          block='spatial')

    corr = spatial_correlation(data.dist, state.phi, config.gp_nugget)
    shape, scale = tau_sq_posterior_params(state.gamma, corr, config)
    state.tau_sq = scale / rng.gamma(shape)

    proposal = state.phi * np.exp(config.log_phi_step * rng.standard_normal())
    log_ratio = \
        phi_log_target(proposal, state.gamma, state.tau_sq, data.dist,
                       config) - \
        phi_log_target(state.phi, state.gamma, state.tau_sq, data.dist,
                       config)
    accepted = bool(np.log(rng.random()) < log_ratio)
    if accepted:
        state.phi = float(proposal)
    return state, accepted
