"""Conjugate updates of the cluster atoms (theta_k, sigma^2_k)

    G0: theta ~ N(theta0, 2 sigma0^2) independent of sigma^2 ~ IG(a0, b0)
"""
import numpy as np


def draw_base_measure(config, rng, size):
    """Draws `size` atoms from G0"""
    theta = config.base_theta0 + \
        np.sqrt(2 * config.base_sigma0_sq) * rng.standard_normal(size)
    sigma_sq = config.base_b0 / rng.gamma(config.base_a0, 1.0, size=size)
    return theta, sigma_sq


def atom_residuals(state, data):
    """y_it - x_it' beta - gamma_i over the observed cells

    Returns:
    -------
    * labels: numpy.array<int>
        memberships of the observed cells

    * resid: numpy.array<float>
    """
    resid = data.y_filled - state.gamma[:, None]
    if data.p > 0:
        resid = resid - data.x @ state.beta
    return state.s[data.observed], resid[data.observed]


def theta_posterior_params(labels, resid, sigma_sq, config):
    """Normal full conditional of every theta_k

    Returns:
    -------
    * mean, var: numpy.array<float>
        shape (H,); unoccupied clusters get the prior
    """
    H = sigma_sq.shape[0]
    counts = np.bincount(labels, minlength=H)
    sums = np.bincount(labels, weights=resid, minlength=H)
    prior_prec = 1 / (2 * config.base_sigma0_sq)
    prec = prior_prec + counts / sigma_sq
    mean = (prior_prec * config.base_theta0 + sums / sigma_sq) / prec
    return mean, 1 / prec


def sigma_sq_posterior_params(labels, resid, theta, config):
    """Inverse-gamma full conditional of every sigma^2_k

    Returns:
    -------
    * shape, scale: numpy.array<float>
    """
    H = theta.shape[0]
    counts = np.bincount(labels, minlength=H)
    sq = np.bincount(labels, weights=(resid - theta[labels]) ** 2,
                     minlength=H)
    return config.base_a0 + 0.5 * counts, config.base_b0 + 0.5 * sq


def update_atoms(state, data, config, rng):
    """Redraws theta_k then sigma^2_k

        The full conditionals of unoccupied atoms reduce to G0, so those
        atoms are refreshed from the base measure by the same draw.
    """
    labels, resid = atom_residuals(state, data)
    H = state.H

    mean, var = theta_posterior_params(labels, resid, state.sigma_sq, config)
    state.theta = mean + np.sqrt(var) * rng.standard_normal(H)

    shape, scale = sigma_sq_posterior_params(labels, resid, state.theta,
                                             config)
    state.sigma_sq = scale / rng.gamma(shape, 1.0, size=H)
    return state
