"""Covariate coefficients beta and their variance rho^2"""
import numpy as np

from arlbsg.core.distributions import sample_mvn_canonical


def beta_posterior_params(state, data):
    """Canonical parameters of beta | rest

        precision = X' W X + I / rho^2,  shift = X' W (y - theta_s - gamma)
        with W = diag(1 / sigma^2_{s_it}) over the observed cells
    """
    X = data.x[data.observed]
    resid = (data.y_filled - state.theta[state.s] -
             state.gamma[:, None])[data.observed]
    w = 1 / state.sigma_sq[state.s[data.observed]]
    precision = (X * w[:, None]).T @ X + np.eye(data.p) / state.rho_sq
    shift = X.T @ (w * resid)
    return precision, shift


def rho_sq_posterior_params(beta, config):
    """IG(a_rho + p / 2, b_rho + beta' beta / 2)"""
    beta = np.asarray(beta, dtype=float)
    return config.a_rho + 0.5 * beta.size, config.b_rho + 0.5 * beta @ beta


def update_regression(state, data, config, rng):
    if data.p == 0:
        return state
    precision, shift = beta_posterior_params(state, data)
    state.beta, _ = sample_mvn_canonical(shift, precision, rng,
                                         jitter=config.jitter,
                                         block='regression')
    if config.estimate_rho_sq:
        shape, scale = rho_sq_posterior_params(state.beta, config)
        state.rho_sq = scale / rng.gamma(shape)
    return state
