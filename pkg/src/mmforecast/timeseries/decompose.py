import calendar
import csv
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, SizeError


@dataclass
class DecompositionResult:
    mode: str
    times: list
    observed: np.ndarray
    trend: np.ndarray       # NaN where the centred window does not fit
    seasonal: np.ndarray    # one index per position in the cycle
    remainder: np.ndarray   # NaN where trend is NaN

    @property
    def period(self):
        return len(self.seasonal)

    @property
    def seasonal_series(self):
        return self.seasonal[np.arange(len(self.observed)) % self.period]

    def seasonal_labels(self):
        """Calendar month names for monthly data, otherwise position numbers."""
        if self.period == 12 and len(self.times) >= 12:
            return [calendar.month_name[self.times[i].month] for i in range(12)]
        return [str(i + 1) for i in range(self.period)]

    def to_csv(self, path):
        seasonal = self.seasonal_series

        def fmt(v):
            return "" if np.isnan(v) else f"{v:.10g}"

        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "observed", "trend", "seasonal", "remainder"])
            for i, t in enumerate(self.times):
                w.writerow([t.isoformat(), fmt(self.observed[i]), fmt(self.trend[i]),
                            fmt(seasonal[i]), fmt(self.remainder[i])])


def centred_moving_average(v, period):
    n = len(v)
    if period % 2 == 0:
        weights = np.r_[0.5, np.ones(period - 1), 0.5] / period
    else:
        weights = np.ones(period) / period
    half = len(weights) // 2
    trend = np.full(n, np.nan)
    if n >= len(weights):
        trend[half:n - half] = np.convolve(v, weights, mode="valid")
    return trend


def decompose(s, mode="additive"):
    """Classical moving-average decomposition into trend, seasonal and remainder."""
    if mode not in ("additive", "multiplicative"):
        raise ValueError(f"unknown decomposition mode {mode!r}")
    v = s.values
    m = s.period
    if len(v) < 2 * m:
        raise SizeError(f"decomposition needs at least {2 * m} observations, got {len(v)}")
    if mode == "multiplicative" and np.any(v <= 0):
        raise DomainError("multiplicative decomposition needs strictly positive values")
    trend = centred_moving_average(v, m)
    detrended = v - trend if mode == "additive" else v / trend
    pos = np.arange(len(v)) % m
    idx = np.array([np.nanmean(detrended[pos == i]) for i in range(m)])
    if mode == "additive":
        idx = idx - idx.mean()
        remainder = v - trend - idx[pos]
    else:
        idx = idx / idx.mean()
        remainder = v / (trend * idx[pos])
    return DecompositionResult(mode, list(s.times), v.copy(), trend, idx, remainder)
