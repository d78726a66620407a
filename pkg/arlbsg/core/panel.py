"""Panel of station-level measurements y_it with covariates and locations"""
import hashlib

import numpy as np

from arlbsg.core.errors import InvalidParameterError
from arlbsg.utils.properties import lazy_property

EARTH_RADIUS_KM = 6371.0


def haversine(coords, other=None, radius=EARTH_RADIUS_KM):
    """Great-circle distances (km) between (lat, lon) pairs in degrees

    Parameters:
    ----------
    * coords: numpy.array<float>
        shape (n, 2) latitude, longitude

    * other: numpy.array<float>
        shape (m, 2); defaults to coords

    Returns:
    -------
    * dist: numpy.array<float>
        shape (n, m)
    """
    coords = np.radians(np.atleast_2d(np.asarray(coords, dtype=float)))
    other = coords if other is None else \
        np.radians(np.atleast_2d(np.asarray(other, dtype=float)))

    lat1, lon1 = coords[:, 0][:, None], coords[:, 1][:, None]
    lat2, lon2 = other[:, 0][None, :], other[:, 1][None, :]
    h = np.sin(0.5 * (lat2 - lat1)) ** 2 + \
        np.cos(lat1) * np.cos(lat2) * np.sin(0.5 * (lon2 - lon1)) ** 2
    return 2 * radius * np.arcsin(np.sqrt(np.clip(h, 0, 1)))


class PanelDataset:
    """Immutable n x T panel

    Attributes:
    ----------
    * y: numpy.array<float>  (n, T), NaN where unobserved
    * observed: numpy.array<bool>  (n, T)
    * x: numpy.array<float>  (n, T, p), zero where unobserved
    * coords: numpy.array<float>  (n, 2) latitude, longitude
    * dist: numpy.array<float>  (n, n) kilometers
    * station_ids, time_labels, covariate_names: tuple<str>
    """

    def __init__(self, y, observed=None, x=None, coords=None, dist=None,
                 station_ids=None, time_labels=None, covariate_names=None):
        y = np.array(y, dtype=float, ndmin=2)
        n, T = y.shape
        if observed is None:
            observed = np.isfinite(y)
        observed = np.array(observed, dtype=bool)
        if observed.shape != (n, T):
            raise InvalidParameterError(
                f'observed mask shape {observed.shape} expected {(n, T)}')

        if x is None:
            x = np.zeros((n, T, 0))
        x = np.array(x, dtype=float)
        if x.ndim != 3 or x.shape[:2] != (n, T):
            raise InvalidParameterError(
                f'covariates shape {x.shape} expected {(n, T)} + (p,)')
        x[~observed] = 0.0
        y = np.where(observed, y, np.nan)

        if coords is None:
            coords = np.zeros((n, 2))
        coords = np.array(coords, dtype=float, ndmin=2)
        if dist is None:
            dist = haversine(coords)
        dist = np.array(dist, dtype=float)

        if station_ids is None:
            station_ids = [str(i + 1) for i in range(n)]
        if time_labels is None:
            time_labels = [str(t + 1) for t in range(T)]
        if covariate_names is None:
            covariate_names = [f'x{j + 1}' for j in range(x.shape[2])]

        self.y = y
        self.observed = observed
        self.x = x
        self.coords = coords
        self.dist = dist
        self.station_ids = tuple(str(s) for s in station_ids)
        self.time_labels = tuple(str(t) for t in time_labels)
        self.covariate_names = tuple(covariate_names)

        for arr in (self.y, self.observed, self.x, self.coords, self.dist):
            arr.setflags(write=False)

    @property
    def n(self):
        return self.y.shape[0]

    @property
    def T(self):
        return self.y.shape[1]

    @property
    def p(self):
        return self.x.shape[2]

    @property
    def n_obs(self):
        return int(self.observed.sum())

    @lazy_property
    def observed_cells(self):
        """Row-major (i, t) pairs of the observed cells"""
        return np.argwhere(self.observed)

    @lazy_property
    def y_filled(self):
        """y with zeros on unobserved cells"""
        out = np.where(self.observed, self.y, 0.0)
        out.setflags(write=False)
        return out

    @lazy_property
    def fingerprint(self):
        """sha256 over the panel's content"""
        digest = hashlib.sha256()
        for arr in (self.y_filled, self.observed, self.x, self.coords,
                    self.dist):
            digest.update(np.ascontiguousarray(arr).tobytes())
            digest.update(str(arr.shape).encode())
        for labels in (self.station_ids, self.time_labels,
                       self.covariate_names):
            digest.update('\x1f'.join(labels).encode())
        return digest.hexdigest()

    def check(self):
        """Lists every violated panel invariant"""
        violations = []
        n, T = self.n, self.T
        if n < 1 or T < 1:
            violations.append(f'panel must be non empty got n={n}, T={T}')
        if self.dist.shape != (n, n):
            violations.append(
                f'distance matrix shape {self.dist.shape} expected {(n, n)}')
        else:
            if not np.allclose(self.dist, self.dist.T, rtol=0, atol=1e-9):
                violations.append('distance matrix is not symmetric')
            if np.any(np.diag(self.dist) != 0):
                violations.append('distance matrix diagonal is not zero')
            if np.any(self.dist < 0) or not np.all(np.isfinite(self.dist)):
                violations.append('distances must be finite and nonnegative')
        if self.coords.shape != (n, 2):
            violations.append(
                f'coordinates shape {self.coords.shape} expected {(n, 2)}')

        bad = self.observed & ~np.isfinite(self.y)
        if bad.any():
            i, t = np.argwhere(bad)[0]
            violations.append(f'observed cell ({i}, {t}) has nonfinite y')
        bad = self.observed & ~np.all(np.isfinite(self.x), axis=2)
        if bad.any():
            i, t = np.argwhere(bad)[0]
            violations.append(f'observed cell ({i}, {t}) has nonfinite x')
        if self.n_obs == 0:
            violations.append('panel has no observed cell')
        if len(self.station_ids) != n or len(self.time_labels) != T:
            violations.append('labels do not match the panel dimensions')
        return violations

    def __eq__(self, other):
        return isinstance(other, PanelDataset) and \
            self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return (f'PanelDataset(n={self.n}, T={self.T}, p={self.p}, '
                f'n_obs={self.n_obs})')
