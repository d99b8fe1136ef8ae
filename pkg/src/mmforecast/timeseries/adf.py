"""Augmented Dickey-Fuller test, constant-only regression."""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import SizeError
from ..numerics import least_squares_solve
from .core import TimeSeries

ALPHA = 0.05

# Dickey-Fuller distribution of the t-ratio with a constant and no trend.
# Rows: sample size; columns: cumulative probabilities in _PROBS.
_SIZES = np.array([25, 50, 100, 250, 500, np.inf])
_PROBS = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])
_TABLE = np.array([
    [-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72],
    [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
    [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
    [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
    [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
    [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
])
P_FLOOR, P_CEIL = 0.001, 0.999


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    lag_order: int
    p_value: float
    reject_null: bool
    n_obs: int

    def as_dict(self):
        return dict(self.__dict__)


def critical_values(n):
    """Quantiles of the constant-only DF distribution at sample size ``n``.

    Interpolates linearly in 1/n between tabulated sizes.
    """
    inv = 1.0 / _SIZES
    x = 1.0 / max(n, 1)
    if x >= inv[0]:
        return _TABLE[0].copy()
    # inv is decreasing; flip for np.interp
    return np.array([np.interp(x, inv[::-1], _TABLE[::-1, j]) for j in range(len(_PROBS))])


def adf_pvalue(stat, n):
    crit = critical_values(n)
    if stat <= crit[0]:
        slope = (_PROBS[1] - _PROBS[0]) / (crit[1] - crit[0])
        p = _PROBS[0] + slope * (stat - crit[0])
    elif stat >= crit[-1]:
        slope = (_PROBS[-1] - _PROBS[-2]) / (crit[-1] - crit[-2])
        p = _PROBS[-1] + slope * (stat - crit[-1])
    else:
        p = float(np.interp(stat, crit, _PROBS))
    return float(min(max(p, P_FLOOR), P_CEIL))


def default_lag(n):
    # integer cube root; the float power lands just under exact cubes
    k = int(round((n - 1) ** (1.0 / 3.0)))
    while k ** 3 > n - 1:
        k -= 1
    while (k + 1) ** 3 <= n - 1:
        k += 1
    return k


def adf_test(s, lag_order="auto"):
    """Regress the first difference on a constant, the lagged level and lagged differences.

    The statistic is the t-ratio on the lagged level. ``lag_order="auto"``
    uses floor((n - 1) ** (1/3)).
    """
    y = s.values if isinstance(s, TimeSeries) else np.asarray(s, dtype=float)
    n = len(y)
    lag = default_lag(n) if lag_order in (None, "auto") else int(lag_order)
    if lag < 0:
        raise ValueError("lag_order must be non-negative")
    if n < lag + 10:
        raise SizeError(f"ADF with lag {lag} needs at least {lag + 10} observations, got {n}")
    dy = np.diff(y)
    rows = len(dy) - lag
    X = np.empty((rows, 2 + lag))
    X[:, 0] = 1.0
    X[:, 1] = y[lag:n - 1]
    for i in range(1, lag + 1):
        X[:, 1 + i] = dy[lag - i:len(dy) - i]
    target = dy[lag:]
    beta = least_squares_solve(X, target)
    resid = target - X @ beta
    dof = rows - X.shape[1]
    sigma2 = resid @ resid / dof
    _, R = np.linalg.qr(X)
    rinv = np.linalg.inv(R)
    var_gamma = sigma2 * (rinv[1] @ rinv[1])
    stat = float(beta[1] / math.sqrt(var_gamma)) if var_gamma > 0 else -np.inf
    if not math.isfinite(stat):
        stat = -1e6
    p = adf_pvalue(stat, rows)
    return AdfResult(stat, lag, p, p < ALPHA, rows)
