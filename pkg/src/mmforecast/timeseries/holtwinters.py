"""Additive-trend Holt-Winters smoothing with additive or multiplicative seasons."""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .. import kernels
from ..errors import DomainError, SizeError

GRID_STEP = 0.05
DEFAULT_WEIGHTS = (0.2, 0.1, 0.1)
MAX_ITER = 2000
SIMPLEX_TOL = 1e-8


@dataclass
class HoltWintersModel:
    alpha: float
    beta: float
    gamma: float
    seasonal_mode: str
    level: float
    trend: float
    season: np.ndarray
    sse: float
    period: int
    n_obs: int
    times: list = field(default_factory=list)

    def summary(self):
        return {
            "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
            "seasonal_mode": self.seasonal_mode, "level": self.level, "trend": self.trend,
            "season": np.asarray(self.season).tolist(), "sse": self.sse, "period": self.period,
        }


def initial_states(y, period, multiplicative):
    """Level, trend and seasonal states at the end of the first cycle.

    Trend is the per-step change between the first two cycle means. The level
    is the first-cycle mean carried forward to the cycle's last step, and
    seasonal states are first-cycle values relative to that linear path.
    """
    m = period
    mean1 = np.mean(y[:m])
    trend = (np.mean(y[m:2 * m]) - mean1) / m
    path = mean1 + trend * (np.arange(m) - (m - 1) / 2.0)
    level = mean1 + trend * (m - 1) / 2.0
    season = y[:m] / path if multiplicative else y[:m] - path
    return float(level), float(trend), np.ascontiguousarray(season, dtype=float)


def _sse(weights, y, period, init, multiplicative):
    a, b, g = weights
    if min(a, b, g) < 0 or max(a, b, g) > 1:
        return np.inf
    sse, _, _, _ = kernels.hw_filter(y, period, float(a), float(b), float(g), *init, multiplicative)
    return sse if np.isfinite(sse) else np.inf


def fit_holt_winters(s, seasonal_mode="additive"):
    """Pick smoothing weights minimising one-step-ahead SSE.

    A 0.05 grid over [0, 1]^3 seeds a bounded Nelder-Mead refinement; the
    better of the two is kept.
    """
    if seasonal_mode not in ("additive", "multiplicative"):
        raise ValueError(f"unknown seasonal mode {seasonal_mode!r}")
    y = np.ascontiguousarray(s.values, dtype=float)
    m = s.period
    if len(y) < 2 * m + 1:
        raise SizeError(f"Holt-Winters needs at least {2 * m + 1} observations, got {len(y)}")
    mult = seasonal_mode == "multiplicative"
    if mult and np.any(y <= 0):
        raise DomainError("multiplicative Holt-Winters needs strictly positive values")
    init = initial_states(y, m, mult)

    ticks = np.round(np.arange(0.0, 1.0 + GRID_STEP / 2, GRID_STEP), 10)
    A, B, G = (g.ravel() for g in np.meshgrid(ticks, ticks, ticks, indexing="ij"))
    A, B, G = (np.ascontiguousarray(x) for x in (A, B, G))
    grid = np.asarray(kernels.hw_sse_grid(y, m, A, B, G, *init, mult))
    grid = np.where(np.isfinite(grid), grid, np.inf)
    k = int(np.argmin(grid))
    best_w, best_sse = np.array([A[k], B[k], G[k]]), float(grid[k])

    if best_sse > 0:
        res = minimize(_sse, best_w, args=(y, m, init, mult), method="Nelder-Mead",
                       bounds=[(0.0, 1.0)] * 3,
                       options={"maxiter": MAX_ITER, "xatol": SIMPLEX_TOL, "fatol": np.inf,
                                "initial_simplex": np.vstack([best_w, best_w + np.diag(
                                    np.where(best_w > 0.5, -GRID_STEP, GRID_STEP))])})
        if res.fun < best_sse:
            best_w, best_sse = np.clip(res.x, 0.0, 1.0), float(res.fun)

    a, b, g = (float(x) for x in best_w)
    sse, level, trend, season = kernels.hw_filter(y, m, a, b, g, *init, mult)
    return HoltWintersModel(a, b, g, seasonal_mode, float(level), float(trend),
                            np.asarray(season, dtype=float), float(sse), m, len(y), list(s.times))


def holt_winters_sse(s, weights, seasonal_mode="additive"):
    """One-step SSE of the filter run at fixed weights."""
    y = np.ascontiguousarray(s.values, dtype=float)
    mult = seasonal_mode == "multiplicative"
    return _sse(weights, y, s.period, initial_states(y, s.period, mult), mult)


def forecast_holt_winters(model, h):
    k = np.arange(1, h + 1)
    idx = (model.n_obs - 1 + k) % model.period
    base = model.level + k * model.trend
    if model.seasonal_mode == "multiplicative":
        return base * model.season[idx]
    return base + model.season[idx]
