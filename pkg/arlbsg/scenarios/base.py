"""Synthetic dynamic-cluster panels with known ground truth

    * balanced: units start uniformly over the clusters and, at every
      t >= 2, a share `jump_rate` of them moves to another cluster
    * imbalanced: units start with the `imbalanced_ratio` shares and, at
      every t >= 2, two units of every cluster rotate to another cluster
"""
import logging
from collections import namedtuple

import numpy as np

from arlbsg.core.distributions import safe_cholesky
from arlbsg.core.errors import InvalidParameterError
from arlbsg.core.gibbs.spatial import spatial_correlation
from arlbsg.core.panel import PanelDataset, haversine
from arlbsg.core.posterior.partitions import canonical_labels, \
    cocluster_stack

SCENARIO_MODES = ('balanced', 'imbalanced')

# (lat_min, lat_max, lon_min, lon_max), roughly continental Chile
DEFAULT_REGION = (-56.0, -17.0, -76.0, -66.0)

''' Truth : namedtuple
        ground truth emitted with a synthetic panel

    * partitions: numpy.array<int>
        (T, n) canonical memberships

    * cocluster: numpy.array<float>
        (T, n, n) 0/1 co-clustering matrices

    * labels: numpy.array<int>
        (n, T) generating cluster indices (index into cluster_means)

    * beta: numpy.array<float>  (p,)

    * gamma: numpy.array<float>  (n,)

'''
Truth = namedtuple('Truth', 'partitions cocluster labels beta gamma')


class ScenarioSpec:
    """Settings of a synthetic scenario"""

    def __init__(
            self,
            n=64,
            T=60,
            cluster_means=(5.0, 32.0, 60.0),
            cluster_var=1.0,
            mode='balanced',
            jump_rate=0.1,
            imbalanced_ratio=(0.70, 0.15, 0.15),
            beta_mean=3.0,
            beta_sd=1.0,
            gamma_mean=3.0,
            tau_sq=2.0,
            phi_km=100.0,
            p=5,
            region_bounds=DEFAULT_REGION,
            seed=0,
    ):
        """Instantiate a scenario.

        PARAMETERS
        ----------
        * n, T: number of units and time points.

        * cluster_means, cluster_var: atoms N(theta_c, cluster_var).

        * mode: one of SCENARIO_MODES.

        * jump_rate: share of units jumping at every step (balanced).

        * imbalanced_ratio: initial cluster shares (imbalanced).

        * beta_mean, beta_sd: beta_j ~ N(beta_mean, beta_sd^2).

        * gamma_mean, tau_sq, phi_km: gamma ~ N_n(gamma_mean 1,
                tau_sq R(phi_km)) with the squared exponential kernel.

        * p: covariates x_itj ~ U(0, 1).

        * region_bounds: (lat_min, lat_max, lon_min, lon_max) degrees.

        """
        kwargs = locals()

        if mode not in SCENARIO_MODES:
            raise InvalidParameterError(
                f'mode must be in {SCENARIO_MODES} got {mode}')

        if len(set(cluster_means)) != len(cluster_means) or \
                len(cluster_means) < 1:
            raise InvalidParameterError(
                f'cluster_means must be distinct got {cluster_means}')

        if not 0 <= jump_rate <= 1:
            raise InvalidParameterError(
                f'''The ineq 0 <= jump_rate <= 1 must hold.
                    got jump_rate = {jump_rate}''')

        if mode == 'imbalanced':
            if len(imbalanced_ratio) != len(cluster_means) or \
                    abs(sum(imbalanced_ratio) - 1) > 1e-9 or \
                    min(imbalanced_ratio) < 0:
                raise InvalidParameterError(
                    f'imbalanced_ratio must be a distribution over the '
                    f'clusters got {imbalanced_ratio}')

        if n < 1 or T < 1 or p < 0:
            raise InvalidParameterError(
                f'n, T must be positive and p nonnegative got {n}, {T}, {p}')

        for attr in ('cluster_var', 'tau_sq', 'phi_km'):
            if not kwargs[attr] > 0:
                raise InvalidParameterError(
                    f'{attr} must be positive got {kwargs[attr]}')

        for attr, value in kwargs.items():
            if attr not in ('self',):
                setattr(self, attr, value)

    @property
    def num_clusters(self):
        return len(self.cluster_means)

    @property
    def jumps_per_step(self):
        """Balanced jumpers per step: nearest integer, at least one"""
        if self.jump_rate == 0:
            return 0
        return max(1, int(round(self.jump_rate * self.n)))

    def replace(self, **kwargs):
        params = dict(self.__dict__)
        params.update(kwargs)
        return ScenarioSpec(**params)

    def to_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in self.__dict__.items()}

    def __repr__(self):
        return f'ScenarioSpec({self.to_dict()})'


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def generate_locations(n, region_bounds=DEFAULT_REGION, seed=None):
    """Uniform points in a lat/lon box and their haversine distances

    Parameters:
    ----------
    * n: int

    * region_bounds: tuple<float>
        (lat_min, lat_max, lon_min, lon_max) in degrees

    * seed: int or numpy.random.Generator

    Returns:
    -------
    * coords: numpy.array<float>
        (n, 2) latitude, longitude

    * dist: numpy.array<float>
        (n, n) kilometers
    """
    if n < 1:
        raise InvalidParameterError(f'n must be positive got {n}')
    lat_min, lat_max, lon_min, lon_max = region_bounds
    if not (lat_min < lat_max and lon_min < lon_max):
        raise InvalidParameterError(
            f'degenerate region bounds {tuple(region_bounds)}')
    if not (-90 <= lat_min and lat_max <= 90):
        raise InvalidParameterError(
            f'latitudes must lie in [-90, 90] got {lat_min}, {lat_max}')

    rng = _as_rng(seed)
    coords = np.column_stack((rng.uniform(lat_min, lat_max, n),
                              rng.uniform(lon_min, lon_max, n)))
    dist = haversine(coords)
    np.fill_diagonal(dist, 0.0)
    dist = 0.5 * (dist + dist.T)
    return coords, dist


def _balanced_step(labels, spec, rng):
    if spec.num_clusters < 2 or spec.jumps_per_step == 0:
        return labels.copy()
    jumpers = rng.choice(spec.n, spec.jumps_per_step, replace=False)
    shift = rng.integers(1, spec.num_clusters, size=jumpers.size)
    labels = labels.copy()
    labels[jumpers] = (labels[jumpers] + shift) % spec.num_clusters
    return labels


def _imbalanced_step(labels, spec, rng, t):
    """Two units per cluster rotate to another cluster, sizes preserved"""
    C = spec.num_clusters
    shift = int(rng.integers(1, C)) if C > 1 else 0
    out = labels.copy()
    for c in range(C):
        members = np.flatnonzero(labels == c)
        size = min(2, members.size)
        if size < 2:
            logging.info(f'cluster {c + 1} has {members.size} members at '
                         f't={t + 1}: jumping {size} units')
        if size == 0:
            continue
        jumpers = rng.choice(members, size, replace=False)
        out[jumpers] = (c + shift) % C
    return out


def generate_memberships(spec, rng):
    """(n, T) cluster indices evolving as the scenario's mode describes"""
    C, n, T = spec.num_clusters, spec.n, spec.T
    labels = np.empty((n, T), dtype=np.int64)
    if spec.mode == 'balanced':
        labels[:, 0] = rng.integers(0, C, n)
    else:
        labels[:, 0] = rng.choice(C, n, p=np.asarray(spec.imbalanced_ratio))

    for t in range(1, T):
        if spec.mode == 'balanced':
            labels[:, t] = _balanced_step(labels[:, t - 1], spec, rng)
        else:
            labels[:, t] = _imbalanced_step(labels[:, t - 1], spec, rng, t)
    return labels


def generate(spec):
    """Synthetic panel plus its ground truth

    Parameters:
    ----------
    * spec: ScenarioSpec

    Returns:
    -------
    * data: PanelDataset

    * truth: Truth
    """
    rng = _as_rng(spec.seed)
    coords, dist = generate_locations(spec.n, spec.region_bounds, rng)
    labels = generate_memberships(spec, rng)

    x = rng.random((spec.n, spec.T, spec.p))
    beta = spec.beta_mean + spec.beta_sd * rng.standard_normal(spec.p)

    corr = spatial_correlation(dist, spec.phi_km)
    chol = safe_cholesky(spec.tau_sq * corr, jitter=1e-10,
                         block='scenario')
    gamma = spec.gamma_mean + chol @ rng.standard_normal(spec.n)

    means = np.asarray(spec.cluster_means, dtype=float)
    y = means[labels] + x @ beta + gamma[:, None] + \
        np.sqrt(spec.cluster_var) * rng.standard_normal((spec.n, spec.T))

    data = PanelDataset(
        y, x=x, coords=coords, dist=dist,
        station_ids=[f'S{i + 1:03d}' for i in range(spec.n)],
        time_labels=[str(t + 1) for t in range(spec.T)],
        covariate_names=[f'x{j + 1}' for j in range(spec.p)])

    partitions = np.array([canonical_labels(labels[:, t])
                           for t in range(spec.T)])
    truth = Truth(partitions, cocluster_stack(partitions), labels, beta,
                  gamma)
    return data, truth


def simulate_crp_cluster_counts(alpha_draws, m, rng, chunk=2 ** 21):
    """Number of tables K_m of a Chinese restaurant process per alpha

        K_m = sum_{i=1}^m Bernoulli(alpha / (alpha + i - 1))

    Parameters:
    ----------
    * alpha_draws: array-like<float>

    * m: int
        number of customers

    * rng: numpy.random.Generator

    Returns:
    -------
    * counts: numpy.array<int>
    """
    alpha = np.atleast_1d(np.asarray(alpha_draws, dtype=float))
    i = np.arange(m, dtype=float)
    rows = max(1, chunk // max(m, 1))
    counts = np.empty(alpha.size, dtype=np.int64)
    for start in range(0, alpha.size, rows):
        a = alpha[start:start + rows, None]
        probs = a / (a + i[None, :])
        counts[start:start + rows] = \
            (rng.random(probs.shape) < probs).sum(axis=1)
    return counts
