"""Random walk update of the AR(1) coefficient psi ~ U(-1, 1)"""
import numpy as np

from arlbsg.core.distributions import ar1_kernel, ar1_log_det, \
    ar1_quadratic_form


def psi_log_target(psi, eps, lam, alpha):
    """sum_k log N_T(eps_k; 0.5 lambda_k (1 - alpha) 1, lambda_k Psi(psi))

    Parameters:
    ----------
    * psi: float

    * eps: numpy.array<float>
        (K, T) free paths

    * lam: numpy.array<float>
        (K,) mixing variables

    * alpha: float

    Returns:
    -------
    * log_target: float
    """
    eps = np.atleast_2d(eps)
    lam = np.atleast_1d(lam)
    K, T = eps.shape
    kernel = ar1_kernel(psi, T)
    centered = eps - 0.5 * lam[:, None] * (1 - alpha)
    quad = np.atleast_1d(ar1_quadratic_form(kernel, centered))
    return float(-0.5 * (K * T * np.log(2 * np.pi) + T * np.log(lam).sum() +
                         K * ar1_log_det(kernel) + (quad / lam).sum()))


def update_psi(state, step, rng):
    """Metropolis-Hastings on atanh(psi)

        The log(1 - psi^2) terms are the Jacobian of the transform.

    Returns:
    -------
    * state: ChainState

    * accepted: bool
    """
    H = state.H
    eps, lam = state.eps[:H - 1], state.lam[:H - 1]
    current = state.psi
    proposal = float(np.tanh(np.arctanh(current) +
                             step * rng.standard_normal()))
    if not -1 < proposal < 1:
        # tanh saturates for very long excursions
        return state, False

    log_ratio = psi_log_target(proposal, eps, lam, state.alpha) + \
        np.log1p(-proposal ** 2) - \
        psi_log_target(current, eps, lam, state.alpha) - \
        np.log1p(-current ** 2)
    accepted = bool(np.log(rng.random()) < log_ratio)
    if accepted:
        state.psi = proposal
    return state, accepted
