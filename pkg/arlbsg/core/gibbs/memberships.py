"""Full conditional of the memberships s_it"""
import numpy as np
from scipy.special import logsumexp

from arlbsg.core.errors import NumericalError

LOG_2PI = np.log(2 * np.pi)


def membership_log_probabilities(state, data):
    """Unnormalized log p(s_it = k | rest), shape (n, T, H)

        log w_tk + log N(y_it; theta_k + x_it' beta + gamma_i, sigma^2_k)

    Unobserved cells keep the log weights only.
    """
    with np.errstate(divide='ignore'):
        log_w = np.log(state.weights).T[None, :, :]

    offset = state.gamma[:, None]
    if data.p > 0:
        offset = offset + data.x @ state.beta
    resid = (data.y_filled - offset)[:, :, None] - state.theta[None, None, :]
    log_lik = -0.5 * (LOG_2PI + np.log(state.sigma_sq) +
                      resid ** 2 / state.sigma_sq)
    log_lik = np.where(data.observed[:, :, None], log_lik, 0.0)
    return log_w + log_lik


def membership_probabilities(state, data):
    """Normalized categorical probabilities, shape (n, T, H)"""
    logp = membership_log_probabilities(state, data)
    top = logp.max(axis=2, keepdims=True)
    if not np.all(np.isfinite(top)):
        i, t = np.argwhere(~np.isfinite(top[:, :, 0]))[0]
        raise NumericalError(
            f'every membership log-probability is -inf at cell ({i}, {t})',
            cell=(int(i), int(t)))
    return np.exp(logp - logsumexp(logp, axis=2, keepdims=True))


def update_memberships(state, data, rng):
    """Redraws every s_it by inverse CDF"""
    probs = membership_probabilities(state, data)
    cdf = np.cumsum(probs, axis=2)
    u = rng.random((data.n, data.T))[:, :, None] * cdf[:, :, -1:]
    s = (cdf <= u).sum(axis=2)
    state.s = np.minimum(s, state.H - 1)
    return state
