from dataclasses import dataclass
from datetime import date

import numpy as np

from .. import kernels
from ..errors import DegenerateError, DomainError, SizeError


def add_months(d, k):
    y, m = divmod(d.month - 1 + k, 12)
    return date(d.year + y, m + 1, 1)


def _monthly_dates(start, n):
    return [add_months(start, i) for i in range(n)]


@dataclass
class TimeSeries:
    """Values on strictly increasing dates with a seasonal period."""

    times: list
    values: np.ndarray
    period: int = 12
    name: str = "series"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        self.times = list(self.times)
        if len(self.times) != len(self.values) or len(self.values) < 1:
            raise SizeError("times and values must be nonempty and the same length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if self.period < 1:
            raise ValueError("period must be at least 1")

    @classmethod
    def from_values(cls, values, period=12, start=date(2000, 1, 1), name="series"):
        values = np.asarray(values, dtype=float).ravel()
        return cls(_monthly_dates(start, len(values)), values, period, name)

    def __len__(self):
        return len(self.values)

    def with_values(self, values, drop_front=0):
        return TimeSeries(self.times[drop_front:], values, self.period, self.name)


def monthly_returns(s):
    """Simple period-over-period returns."""
    v = s.values
    if len(v) < 2:
        raise SizeError("returns need at least 2 observations")
    if np.any(v <= 0):
        raise DomainError("returns need strictly positive values")
    return s.with_values(np.diff(v) / v[:-1], drop_front=1)


def difference(s, d=1):
    if len(s) <= d:
        raise SizeError(f"cannot difference {len(s)} observations {d} times")
    return s.with_values(np.diff(s.values, n=d), drop_front=d)


def difference_heads(values, d):
    """Last value of each of the 0..d-1 fold differences, for undifferencing."""
    heads = []
    v = np.asarray(values, dtype=float)
    for _ in range(d):
        heads.append(v[-1])
        v = np.diff(v)
    return heads


def undifference(diffed, heads):
    """Inverse of repeated differencing continuing from ``heads``."""
    out = np.asarray(diffed, dtype=float)
    for head in reversed(heads):
        out = head + np.cumsum(out)
    return out


def acf(s, max_lag):
    """Sample autocorrelations for lags 0..max_lag."""
    v = s.values if isinstance(s, TimeSeries) else np.asarray(s, dtype=float)
    n = len(v)
    if n <= max_lag:
        raise SizeError(f"acf up to lag {max_lag} needs more than {max_lag} observations")
    z = v - v.mean()
    denom = z @ z
    if denom == 0:
        raise DegenerateError("acf of a constant series is undefined")
    return np.array([1.0] + [(z[:n - k] @ z[k:]) / denom for k in range(1, max_lag + 1)])


def pacf(s, max_lag):
    """Partial autocorrelations for lags 1..max_lag (Durbin-Levinson on the ACF)."""
    r = np.ascontiguousarray(acf(s, max_lag))
    return np.asarray(kernels.durbin_levinson(r, max_lag))
