"""Samplers and densities of the special laws consumed by the sampler

    * logistic-beta and its Polya variance-mean mixture
    * Polya-gamma PG(b, c)
    * Stirling-gamma SG(a, b, m)
    * multivariate normals in precision form, AR(1) correlation

Every sampler takes an explicit `numpy.random.Generator`.
"""
import logging

import numpy as np
from scipy import integrate, linalg
from scipy.optimize import brentq
from scipy.special import betaln, digamma, expit, gammaln, log_expit, \
    log_ndtr, polygamma

from arlbsg.core.errors import InvalidParameterError, NumericalError
from arlbsg.core.params import AR1Kernel

# Devroye's switching point for PG(1, z)
PG_TRUNC = 0.64

# relative variance of the discarded Polya terms
POLYA_TAIL_TOL = 1e-8
POLYA_MIN_TERMS = 64
POLYA_MAX_TERMS = 20000
POLYA_CHUNK = 2 ** 21

SG_GRID_SIZE = 4096
# log density drop that delimits the Stirling-gamma grid
SG_TAIL_NATS = 35.0


def _check_shapes(a, b):
    if not (np.all(np.asarray(a) > 0) and np.all(np.asarray(b) > 0)):
        raise InvalidParameterError(
            f'shapes must be positive got a={a}, b={b}')


# ---------------------------------------------------------------------------
# Logistic-beta
# ---------------------------------------------------------------------------
def logistic_beta_log_density(eps, a, b):
    """log B(a,b)^-1 + a log expit(eps) + b log expit(-eps)"""
    _check_shapes(a, b)
    eps = np.asarray(eps, dtype=float)
    return a * log_expit(eps) + b * log_expit(-eps) - betaln(a, b)


def logistic_beta_density(eps, a, b):
    """Univariate logistic-beta density

    Parameters:
    ----------
    * eps: float or numpy.array
        evaluation points on the real line

    * a, b: float
        positive shapes; expit(eps) ~ Beta(a, b)

    Returns:
    -------
    * density: float or numpy.array
    """
    out = np.exp(logistic_beta_log_density(eps, a, b))
    return float(out) if np.ndim(out) == 0 else out


def sample_logistic_beta(params, rng, size=None):
    """Draws from the multivariate logistic-beta LB(a, b, Psi)

        lambda ~ Polya(a, b)
        eps | lambda ~ N_T(0.5 lambda (a - b) 1_T, lambda Psi)

    Parameters:
    ----------
    * params: arlbsg.core.params.LogisticBetaParams

    * rng: numpy.random.Generator

    * size: int or None

    Returns:
    -------
    * eps: numpy.array<float>
        shape (T,) when size is None else (size, T)
    """
    a, b, kernel = params
    _check_shapes(a, b)
    num = 1 if size is None else int(size)

    lam = np.atleast_1d(sample_polya(a, b, rng, size=num))
    chol = np.linalg.cholesky(ar1_correlation(kernel))
    z = rng.standard_normal((num, kernel.dim)) @ chol.T
    eps = 0.5 * lam[:, None] * (a - b) + np.sqrt(lam)[:, None] * z
    return eps[0] if size is None else eps


# ---------------------------------------------------------------------------
# Polya
# ---------------------------------------------------------------------------
def polya_mean(a, b):
    """E[lambda] for lambda ~ Polya(a, b)

        2 (digamma(a) - digamma(b)) / (a - b), and 2 trigamma(a) when a = b
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    diff = a - b
    close = np.abs(diff) < 1e-8 * np.maximum(1.0, np.abs(a))
    safe = np.where(close, 1.0, diff)
    out = np.where(close,
                   2 * polygamma(1, 0.5 * (a + b)),
                   2 * (digamma(a) - digamma(b)) / safe)
    return float(out) if out.ndim == 0 else out


def polya_num_terms(a, b):
    """Number of exponential terms kept by `sample_polya`

        The discarded terms have variance close to 4 / (3 K^3); K is the
        smallest integer bringing it below POLYA_TAIL_TOL * E[lambda]^2,
        clipped to [POLYA_MIN_TERMS, POLYA_MAX_TERMS].
    """
    mean = polya_mean(a, b)
    num_terms = np.ceil((4.0 / (3.0 * POLYA_TAIL_TOL * mean ** 2)) ** (1 / 3))
    return int(np.clip(num_terms, POLYA_MIN_TERMS, POLYA_MAX_TERMS))


def sample_polya(a, b, rng, size=None):
    """Draws from the Polya(a, b) mixing law

        lambda = sum_{k >= 0} 2 E_k / ((a + k)(b + k)),  E_k ~ Exp(1)

    The series is truncated at `polya_num_terms(a, b)` and the discarded
    terms are replaced by their expectation.

    Parameters:
    ----------
    * a, b: float
        positive shapes

    * rng: numpy.random.Generator

    * size: int or None

    Returns:
    -------
    * lambda: float or numpy.array<float>
    """
    _check_shapes(a, b)
    num_terms = polya_num_terms(a, b)
    k = np.arange(num_terms, dtype=float)
    weights = 2.0 / ((a + k) * (b + k))
    tail = max(polya_mean(a, b) - weights.sum(), 0.0)

    num = 1 if size is None else int(size)
    chunk = max(1, POLYA_CHUNK // num_terms)
    out = np.empty(num)
    for start in range(0, num, chunk):
        stop = min(num, start + chunk)
        expo = rng.standard_exponential((stop - start, num_terms))
        out[start:stop] = expo @ weights + tail
    return float(out[0]) if size is None else out


# ---------------------------------------------------------------------------
# Polya-gamma
# ---------------------------------------------------------------------------
def polya_gamma_moments(count, tilt):
    """Mean and variance of PG(count, tilt)

        mean = b / (2c) tanh(c/2)
        var  = b / (4c^3) (sinh(c) - c) sech^2(c/2)
    """
    b = np.asarray(count, dtype=float)
    c = np.abs(np.asarray(tilt, dtype=float))
    small = c < 1e-2
    cs = np.where(small, 1.0, c)
    th = np.tanh(0.5 * cs)
    mean = np.where(small,
                    0.25 * b * (1 - c ** 2 / 12),
                    0.5 * b * th / cs)
    var = np.where(small,
                   b / 24 - b * c ** 2 / 120,
                   b * (2 * th - cs * (1 - th ** 2)) / (4 * cs ** 3))
    return mean, var


def _texpon_mass(z, fz):
    """Probability of the exponential piece of Devroye's proposal"""
    t = PG_TRUNC
    b = np.sqrt(1 / t) * (t * z - 1)
    a = -np.sqrt(1 / t) * (t * z + 1)
    x0 = np.log(fz) + fz * t
    xb = x0 - z + log_ndtr(b)
    xa = x0 + z + log_ndtr(a)
    log_qdivp = np.log(4 / np.pi) + np.logaddexp(xb, xa)
    return expit(-log_qdivp)


def _series_coef(n, x):
    """n-th coefficient of the alternating series for J*(1, z)"""
    k = (n + 0.5) * np.pi
    out = np.empty_like(x)
    hi = x > PG_TRUNC
    out[hi] = k * np.exp(-0.5 * k * k * x[hi])
    lo = ~hi
    xl = x[lo]
    out[lo] = np.exp(-1.5 * (np.log(0.5 * np.pi) + np.log(xl))
                     + np.log(k) - 2 * (n + 0.5) ** 2 / xl)
    return out


def _sample_truncated_inverse_gaussian(z, rng):
    """IG(1/z, 1) truncated to (0, PG_TRUNC)"""
    t = PG_TRUNC
    out = np.empty(z.size)
    with np.errstate(divide='ignore'):
        mu = np.where(z > 0, 1.0 / z, np.inf)

    # mean above the truncation: chi-square proposal
    remaining = mu > t
    while remaining.any():
        idx = np.flatnonzero(remaining)
        e1 = rng.standard_exponential(idx.size)
        e2 = rng.standard_exponential(idx.size)
        ok = e1 ** 2 <= 2 * e2 / t
        cand = idx[ok]
        x = t / (1 + t * e1[ok]) ** 2
        accept = rng.random(cand.size) <= np.exp(-0.5 * z[cand] ** 2 * x)
        out[cand[accept]] = x[accept]
        remaining[cand[accept]] = False

    remaining = ~(mu > t)
    while remaining.any():
        idx = np.flatnonzero(remaining)
        m = mu[idx]
        y = rng.standard_normal(idx.size) ** 2
        x = m + 0.5 * m * m * y - 0.5 * m * np.sqrt(4 * m * y + (m * y) ** 2)
        flip = rng.random(idx.size) > m / (m + x)
        x[flip] = m[flip] ** 2 / x[flip]
        ok = x <= t
        out[idx[ok]] = x[ok]
        remaining[idx[ok]] = False
    return out


def _sample_pg1(tilt, rng):
    """Devroye's exact sampler for PG(1, tilt), vectorized

    References:
    ----------
        Polson, Scott and Windle, Bayesian inference for logistic models
        using Polya-gamma latent variables, 2013
    """
    z = 0.5 * np.abs(np.asarray(tilt, dtype=float)).ravel()
    fz = np.pi ** 2 / 8 + z ** 2 / 2
    p_exp = _texpon_mass(z, fz)
    out = np.empty(z.size)

    pending = np.arange(z.size)
    while pending.size:
        zp, fp = z[pending], fz[pending]
        x = np.empty(pending.size)
        expo = rng.random(pending.size) < p_exp[pending]
        x[expo] = PG_TRUNC + \
            rng.standard_exponential(int(expo.sum())) / fp[expo]
        x[~expo] = _sample_truncated_inverse_gaussian(zp[~expo], rng)

        # alternating series acceptance
        s = _series_coef(0, x)
        y = rng.random(x.size) * s
        accepted = np.zeros(x.size, dtype=bool)
        decided = np.zeros(x.size, dtype=bool)
        n = 0
        while not decided.all():
            n += 1
            idx = np.flatnonzero(~decided)
            coef = _series_coef(n, x[idx])
            if n % 2 == 1:
                s[idx] -= coef
                hit = y[idx] <= s[idx]
                accepted[idx[hit]] = True
                decided[idx[hit]] = True
            else:
                s[idx] += coef
                decided[idx[y[idx] > s[idx]]] = True

        out[pending[accepted]] = 0.25 * x[accepted]
        pending = pending[~accepted]
    return out.reshape(np.shape(tilt))


def sample_polya_gamma(count, tilt, rng, exact_threshold=170):
    """Draws from PG(count, tilt)

    Parameters:
    ----------
    * count: int or numpy.array<int>
        positive counts b

    * tilt: float or numpy.array<float>
        tilting parameters c, broadcast against count

    * rng: numpy.random.Generator

    * exact_threshold: int
        counts up to this value are summed from exact PG(1, c) draws,
        larger ones use a moment matched normal

    Returns:
    -------
    * xi: float or numpy.array<float>
    """
    counts, tilts = np.broadcast_arrays(np.asarray(count),
                                        np.asarray(tilt, dtype=float))
    if np.any(counts < 1):
        raise InvalidParameterError(
            f'Polya-gamma count must be at least 1 got {counts.min()}')
    counts = counts.astype(np.int64).ravel()
    tilts = tilts.ravel()
    out = np.empty(counts.size)

    exact = counts <= exact_threshold
    if exact.any():
        c = counts[exact]
        draws = _sample_pg1(np.repeat(tilts[exact], c), rng)
        starts = np.concatenate(([0], np.cumsum(c)[:-1]))
        out[exact] = np.add.reduceat(draws, starts)

    approx = ~exact
    if approx.any():
        mean, var = polya_gamma_moments(counts[approx], tilts[approx])
        draws = mean + np.sqrt(var) * rng.standard_normal(mean.size)
        out[approx] = np.maximum(draws, np.finfo(float).tiny)

    if np.ndim(count) == 0 and np.ndim(tilt) == 0:
        return float(out[0])
    return out.reshape(np.broadcast(np.asarray(count), np.asarray(tilt)).shape)


# ---------------------------------------------------------------------------
# Stirling-gamma
# ---------------------------------------------------------------------------
def _check_stirling_gamma(params):
    a, b, m = params
    if not (a > 0 and b > 0 and m >= 1):
        raise InvalidParameterError(
            f'Stirling-gamma expects a, b > 0 and m >= 1 got {tuple(params)}')
    if not 1 < a / b < m:
        raise InvalidParameterError(
            f'Stirling-gamma constraint 1 < a/b < m violated: '
            f'a/b = {a / b}, m = {m}')


def stirling_gamma_log_density_unnorm(alpha, params):
    """(a - 1) log alpha - b sum_{r < m} log(alpha + r)

    Parameters:
    ----------
    * alpha: float or numpy.array
        positive concentration values

    * params: StirlingGammaParams

    Returns:
    -------
    * log_density: float or numpy.array
    """
    a, b, m = params
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise InvalidParameterError(f'alpha must be positive got {alpha}')
    out = (a - 1) * np.log(alpha) - b * (gammaln(alpha + m) - gammaln(alpha))
    return float(out) if out.ndim == 0 else out


def _log_density_log_scale(u, params):
    # density of log(alpha), includes the Jacobian
    a, b, m = params
    alpha = np.exp(u)
    return a * u - b * (gammaln(alpha + m) - gammaln(alpha))


def stirling_gamma_mode(params):
    """Mode of log(alpha) under SG(a, b, m)

        Solves a = b alpha (digamma(alpha + m) - digamma(alpha)); the
        right hand side grows from b to b m so the root is unique.
    """
    a, b, m = params

    def score(u):
        alpha = np.exp(u)
        return a - b * alpha * (digamma(alpha + m) - digamma(alpha))

    lo, hi = -10.0, np.log(m) + 10.0
    while score(lo) <= 0:
        lo -= 10.0
    while score(hi) >= 0:
        hi += 10.0
    return brentq(score, lo, hi, xtol=1e-12)


def stirling_gamma_support(params):
    """Interval of log(alpha) outside of which the density is negligible"""
    _check_stirling_gamma(params)
    mode = stirling_gamma_mode(params)
    top = _log_density_log_scale(mode, params)

    bounds = []
    for direction in (-1.0, 1.0):
        step = 1.0
        u = mode + direction * step
        while top - _log_density_log_scale(u, params) < SG_TAIL_NATS:
            step *= 2
            u = mode + direction * step
        bounds.append(u)
    return bounds[0], mode, bounds[1]


def stirling_gamma_grid(params, size=SG_GRID_SIZE):
    """Grid over log(alpha) and the matching CDF values

    Returns:
    -------
    * grid: numpy.array<float>
        equally spaced log(alpha) values

    * cdf: numpy.array<float>
        trapezoidal CDF, cdf[0] = 0 and cdf[-1] = 1
    """
    lo, mode, hi = stirling_gamma_support(params)
    grid = np.linspace(lo, hi, size)
    logp = _log_density_log_scale(grid, params)
    dens = np.exp(logp - logp.max())
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]))))
    return grid, cdf / cdf[-1]


def stirling_gamma_log_normalizer(params):
    """log of the integral of exp(stirling_gamma_log_density_unnorm)"""
    lo, mode, hi = stirling_gamma_support(params)
    top = _log_density_log_scale(mode, params)
    value, _ = integrate.quad(
        lambda u: np.exp(_log_density_log_scale(u, params) - top),
        lo, hi, points=[mode], epsabs=0, epsrel=1e-12, limit=500)
    return top + np.log(value)


def stirling_gamma_density(alpha, params):
    log_norm = stirling_gamma_log_normalizer(params)
    return np.exp(stirling_gamma_log_density_unnorm(alpha, params) - log_norm)


def sample_stirling_gamma(params, rng, size=None):
    """Draws from SG(a, b, m) by inverse CDF on a log(alpha) grid

    Parameters:
    ----------
    * params: StirlingGammaParams

    * rng: numpy.random.Generator

    * size: int or None

    Returns:
    -------
    * alpha: float or numpy.array<float>
    """
    grid, cdf = stirling_gamma_grid(params)
    u = rng.random(1 if size is None else int(size))
    alpha = np.exp(np.interp(u, cdf, grid))
    return float(alpha[0]) if size is None else alpha


# ---------------------------------------------------------------------------
# Gaussian helpers
# ---------------------------------------------------------------------------
def safe_cholesky(matrix, jitter=1e-10, block=None):
    """Lower Cholesky factor, retrying once with diagonal jitter

    Parameters:
    ----------
    * matrix: numpy.array
        symmetric positive definite

    * jitter: float
        relative jitter, jitter * trace / dim is added to the diagonal

    * block: str
        name reported on failure

    Raises:
    ------
    * NumericalError
        if the factorization fails after jitter
    """
    matrix = np.asarray(matrix, dtype=float)
    try:
        return linalg.cholesky(matrix, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError):
        pass

    dim = matrix.shape[0]
    bump = jitter * max(np.trace(matrix) / dim, np.finfo(float).tiny)
    logging.warning(f'cholesky failed ({block}): adding {bump:.3g} jitter')
    try:
        return linalg.cholesky(matrix + bump * np.eye(dim), lower=True)
    except (linalg.LinAlgError, ValueError):
        with np.errstate(all='ignore'):
            cond = float(np.linalg.cond(matrix)) \
                if np.all(np.isfinite(matrix)) else float('inf')
        raise NumericalError(
            'matrix is not positive definite after jitter',
            block=block, condition_number=cond, jitter=bump)


def sample_mvn_precision(mean, precision, rng, jitter=1e-10):
    """x ~ N(mean, precision^-1)

        With precision = L L', x = mean + L'^-1 z.
    """
    mean = np.asarray(mean, dtype=float)
    chol = safe_cholesky(precision, jitter, block='mvn')
    z = rng.standard_normal(mean.shape[0])
    return mean + linalg.solve_triangular(chol.T, z, lower=False)


def sample_mvn_canonical(shift, precision, rng, jitter=1e-10, block=None):
    """x ~ N(precision^-1 shift, precision^-1)

    Returns:
    -------
    * draw: numpy.array<float>

    * mean: numpy.array<float>
        the conditional mean precision^-1 shift
    """
    chol = safe_cholesky(precision, jitter, block=block)
    mean = linalg.cho_solve((chol, True), np.asarray(shift, dtype=float))
    z = rng.standard_normal(mean.shape[0])
    return mean + linalg.solve_triangular(chol.T, z, lower=False), mean


def mvn_log_density(x, mean, cov, jitter=1e-10, block=None):
    """log N(x; mean, cov) via a Cholesky factor of cov"""
    chol = safe_cholesky(cov, jitter, block=block)
    resid = linalg.solve_triangular(
        chol, np.asarray(x, dtype=float) - mean, lower=True)
    dim = resid.shape[0]
    return -0.5 * (dim * np.log(2 * np.pi) + resid @ resid) \
        - np.log(np.diag(chol)).sum()


# ---------------------------------------------------------------------------
# AR(1)
# ---------------------------------------------------------------------------
def _check_kernel(kernel):
    psi, dim = kernel
    if not -1 < psi < 1:
        raise InvalidParameterError(f'|psi| must be below one got {psi}')
    if dim < 1:
        raise InvalidParameterError(f'dim must be positive got {dim}')


def ar1_correlation(kernel):
    """Dense Psi with entries psi ** |t - t'|"""
    _check_kernel(kernel)
    lags = np.abs(np.subtract.outer(np.arange(kernel.dim),
                                    np.arange(kernel.dim)))
    return np.power(float(kernel.psi), lags)


def ar1_precision(kernel):
    """Tridiagonal inverse of the AR(1) correlation matrix

        (1 - psi^2)^-1 * tridiag(-psi, [1, 1 + psi^2, ..., 1 + psi^2, 1], -psi)

    Parameters:
    ----------
    * kernel: AR1Kernel

    Returns:
    -------
    * precision: numpy.array<float>
        shape (dim, dim)
    """
    _check_kernel(kernel)
    psi, dim = kernel
    if dim == 1:
        return np.ones((1, 1))
    diag = np.full(dim, 1 + psi ** 2)
    diag[0] = diag[-1] = 1.0
    precision = np.diag(diag)
    if dim > 1:
        off = np.full(dim - 1, -psi)
        precision += np.diag(off, 1) + np.diag(off, -1)
    return precision / (1 - psi ** 2)


def ar1_log_det(kernel):
    """log |Psi| = (dim - 1) log(1 - psi^2)"""
    _check_kernel(kernel)
    return (kernel.dim - 1) * np.log1p(-kernel.psi ** 2)


def ar1_quadratic_form(kernel, v):
    """v' Psi^-1 v without forming the precision, row-wise for 2-d v"""
    _check_kernel(kernel)
    psi = kernel.psi
    rows = np.atleast_2d(v)
    total = (rows ** 2).sum(axis=1)
    if rows.shape[1] > 1:
        total = total + psi ** 2 * (rows[:, 1:-1] ** 2).sum(axis=1)
        total = total - 2 * psi * (rows[:, 1:] * rows[:, :-1]).sum(axis=1)
        total = total / (1 - psi ** 2)
    return float(total[0]) if np.ndim(v) == 1 else total


def ar1_kernel(psi, dim):
    kernel = AR1Kernel(float(psi), int(dim))
    _check_kernel(kernel)
    return kernel
