"""Long format csv panels

    One row per (station, time) with the columns

        station_id, time, y, lat, lon, <covariates...>

    `time` is either YYYY-MM (monthly) or an integer. An empty `y` marks an
    unobserved cell, as does a (station, time) pair without a row.
"""
import logging
import re

import numpy as np
import pandas as pd

from arlbsg.core.errors import IngestionError
from arlbsg.core.panel import PanelDataset

REQUIRED_COLUMNS = ('station_id', 'time', 'y', 'lat', 'lon')

MONTHLY = re.compile(r'^\d{4}-\d{2}$')

INTEGER = re.compile(r'^[+-]?\d+$')


def _line(index):
    # header is line 1
    return int(index) + 2


def circular_encoding(degrees):
    """sin and cos of an angle in degrees"""
    radians = np.asarray(degrees, dtype=float) * np.pi / 180
    return np.sin(radians), np.cos(radians)


def _parse_numeric(frame, column, allow_empty=False):
    raw = frame[column].str.strip()
    values = pd.to_numeric(raw.replace('', np.nan), errors='coerce')
    bad = values.isna() & (raw != '') if allow_empty else values.isna()
    if bad.any():
        rows = [_line(i) for i in frame.index[bad]]
        raise IngestionError(
            f'unparseable numeric values in column `{column}` at rows {rows}',
            rows=rows)
    return values.to_numpy(dtype=float)


def parse_times(raw):
    """Time axis of the panel and the position of every row on it

    Parameters:
    ----------
    * raw: pandas.Series<str>

    Returns:
    -------
    * labels: list<str>
        every step between the first and the last time

    * positions: numpy.array<int>
    """
    raw = raw.str.strip()
    monthly = raw.str.match(MONTHLY)
    integer = raw.str.match(INTEGER)

    if monthly.all():
        year = raw.str.slice(0, 4).astype(np.int64).to_numpy()
        month = raw.str.slice(5, 7).astype(np.int64).to_numpy()
        bad = (month < 1) | (month > 12)
        if bad.any():
            rows = [_line(i) for i in raw.index[bad]]
            raise IngestionError(f'invalid months at rows {rows}', rows=rows)
        months = 12 * year + month - 1
        first = int(months.min())
        start = pd.Period(year=first // 12, month=first % 12 + 1, freq='M')
        axis = pd.period_range(start, periods=int(months.max()) - first + 1,
                               freq='M')
        return [str(p) for p in axis], months - first

    if integer.all():
        values = raw.astype(np.int64).to_numpy()
        uniques = np.unique(values)
        step = int(np.gcd.reduce(np.diff(uniques))) if uniques.size > 1 \
            else 1
        axis = np.arange(uniques[0], uniques[-1] + 1, step)
        return [str(v) for v in axis], (values - uniques[0]) // step

    bad = ~(monthly if monthly.sum() >= integer.sum() else integer)
    rows = [_line(i) for i in raw.index[bad]]
    raise IngestionError(
        f'times must all be YYYY-MM or all integers: rows {rows}', rows=rows)


def apply_transforms(covariates, angle_columns=(), square_columns=(),
                     interactions=()):
    """Derived covariates

    * angle columns are replaced by `<name>_sin` and `<name>_cos`
    * square columns add `<name>_sq`
    * interaction pairs (a, b) add `<a>_x_<b>`

    Returns:
    -------
    * values: dict<str, numpy.array<float>>

    * names: list<str>
        covariate order of the panel
    """
    values = dict(covariates)
    names = []
    for name in values:
        if name in angle_columns:
            names.extend([f'{name}_sin', f'{name}_cos'])
        else:
            names.append(name)

    for name in angle_columns:
        if name not in values:
            raise IngestionError(f'unknown angle column `{name}`')
        values[f'{name}_sin'], values[f'{name}_cos'] = \
            circular_encoding(values[name])

    for name in square_columns:
        if name not in values:
            raise IngestionError(f'unknown square column `{name}`')
        values[f'{name}_sq'] = values[name] ** 2
        names.append(f'{name}_sq')

    for first, second in interactions:
        for name in (first, second):
            if name not in values:
                raise IngestionError(f'unknown interaction column `{name}`')
        values[f'{first}_x_{second}'] = values[first] * values[second]
        names.append(f'{first}_x_{second}')
    return values, names


def load_panel_csv(path, angle_columns=(), square_columns=(), interactions=(),
                   covariates=None):
    """Reads a long format csv into a PanelDataset

    Parameters:
    ----------
    * path: str or pathlib.Path

    * angle_columns: sequence<str>
        circular covariates in degrees, e.g wind direction

    * square_columns: sequence<str>

    * interactions: sequence<tuple<str, str>>

    * covariates: sequence<str>
        raw covariate columns; defaults to every non required column

    Returns:
    -------
    * data: PanelDataset

    Raises:
    ------
    * IngestionError
        missing columns, duplicated (station, time) rows, unparseable
        numbers and stations without observations, with their row numbers
    """
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    frame.columns = [c.strip() for c in frame.columns]
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestionError(f'missing columns {missing} in {path}')
    if frame.empty:
        raise IngestionError(f'no rows in {path}')

    if covariates is None:
        covariates = [c for c in frame.columns if c not in REQUIRED_COLUMNS]
    unknown = [c for c in covariates if c not in frame.columns]
    if unknown:
        raise IngestionError(f'unknown covariate columns {unknown}')

    frame['station_id'] = frame['station_id'].str.strip()
    time_labels, positions = parse_times(frame['time'])
    frame['_t'] = positions

    duplicated = frame.duplicated(['station_id', '_t'], keep=False)
    if duplicated.any():
        rows = [_line(i) for i in frame.index[duplicated]]
        raise IngestionError(f'duplicate (station_id, time) rows {rows}',
                             rows=rows)

    y = _parse_numeric(frame, 'y', allow_empty=True)
    observed_rows = np.isfinite(y)
    lat = _parse_numeric(frame, 'lat')
    lon = _parse_numeric(frame, 'lon')

    raw = {}
    for name in covariates:
        column = frame[name].str.strip()
        # unobserved cells may leave covariates empty
        values = _parse_numeric(frame, name, allow_empty=True)
        bad = observed_rows & (column == '').to_numpy()
        if bad.any():
            rows = [_line(i) for i in frame.index[bad]]
            raise IngestionError(
                f'empty covariate `{name}` on observed rows {rows}', rows=rows)
        raw[name] = values
    values, names = apply_transforms(raw, angle_columns, square_columns,
                                     interactions)

    station_ids = list(dict.fromkeys(frame['station_id']))
    index = {sid: i for i, sid in enumerate(station_ids)}
    rows_i = frame['station_id'].map(index).to_numpy()
    n, T, p = len(station_ids), len(time_labels), len(names)

    per_station = np.bincount(rows_i, weights=observed_rows.astype(float),
                              minlength=n)
    empty = [station_ids[i] for i in np.flatnonzero(per_station == 0)]
    if empty:
        rows = [_line(i) for i in frame.index[frame['station_id'].isin(empty)]]
        raise IngestionError(
            f'stations without observations {empty} at rows {rows}',
            rows=rows)

    coords = np.full((n, 2), np.nan)
    for i in range(n):
        mask = rows_i == i
        pairs = np.unique(np.column_stack((lat[mask], lon[mask])), axis=0)
        if pairs.shape[0] > 1:
            rows = [_line(j) for j in frame.index[mask]]
            raise IngestionError(
                f'station {station_ids[i]} has several coordinates at rows '
                f'{rows}', rows=rows)
        coords[i] = pairs[0]

    Y = np.full((n, T), np.nan)
    X = np.zeros((n, T, p))
    Y[rows_i, positions] = y
    for j, name in enumerate(names):
        X[rows_i, positions, j] = np.nan_to_num(values[name], nan=0.0)

    data = PanelDataset(Y, x=X, coords=coords, station_ids=station_ids,
                        time_labels=time_labels, covariate_names=names)
    logging.info(f'loaded {data} from {path}')
    return data


def load_partitions_csv(path, data):
    """(T, n) 0-based partitions from a (time, station_id, cluster) csv

        Rows are aligned on the panel's station ids and time labels.
    """
    frame = pd.read_csv(path, dtype={'time': str, 'station_id': str})
    missing = [c for c in ('time', 'station_id', 'cluster')
               if c not in frame.columns]
    if missing:
        raise IngestionError(f'missing columns {missing} in {path}')

    stations = {sid: i for i, sid in enumerate(data.station_ids)}
    times = {label: t for t, label in enumerate(data.time_labels)}
    i = frame['station_id'].map(stations)
    t = frame['time'].map(times)
    unknown = i.isna() | t.isna()
    if unknown.any():
        rows = [_line(k) for k in frame.index[unknown]]
        raise IngestionError(f'unknown station or time at rows {rows}',
                             rows=rows)

    series = np.full((data.T, data.n), -1, dtype=np.int64)
    series[t.to_numpy(dtype=np.int64), i.to_numpy(dtype=np.int64)] = \
        frame['cluster'].to_numpy(dtype=np.int64) - 1
    if np.any(series < 0):
        raise IngestionError(f'{path} does not cover every (station, time)')
    return series
