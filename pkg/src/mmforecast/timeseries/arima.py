"""ARIMA estimated by conditional sum of squares, plus automatic order search."""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .. import kernels
from ..errors import ConvergenceError, SearchError, SizeError
from .adf import adf_test
from .core import TimeSeries, difference_heads, undifference

log = logging.getLogger(__name__)

MAX_ITER = 2000
SIMPLEX_TOL = 1e-8
INITIAL_STEP = 0.1
_PENALTY = 1e12


@dataclass
class ArimaModel:
    order: tuple
    drift: bool = False
    drift_coef: float = 0.0
    ar_coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    ma_coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sigma2: float = float("nan")
    log_likelihood: float = float("nan")
    aic: float = float("nan")
    bic: float = float("nan")
    n_eff: int = 0
    # training data needed to forecast
    series: np.ndarray = field(default_factory=lambda: np.zeros(0))
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    times: list = field(default_factory=list)
    period: int = 12
    iterations: int = 0
    candidates: list = field(default_factory=list)

    def __post_init__(self):
        self.order = tuple(int(k) for k in self.order)
        if any(k < 0 for k in self.order):
            raise ValueError("ARIMA orders must be non-negative")
        self.ar_coeffs = np.asarray(self.ar_coeffs, dtype=float)
        self.ma_coeffs = np.asarray(self.ma_coeffs, dtype=float)
        self.series = np.asarray(self.series, dtype=float)
        self.residuals = np.asarray(self.residuals, dtype=float)

    @property
    def n_params(self):
        p, _, q = self.order
        return p + q + int(self.drift) + 1

    @property
    def label(self):
        p, d, q = self.order
        return f"ARIMA({p},{d},{q})" + (" with drift" if self.drift and d else
                                          " with mean" if self.drift else "")

    def summary(self):
        return {
            "order": list(self.order),
            "drift": self.drift,
            "drift_coef": self.drift_coef,
            "ar_coeffs": self.ar_coeffs.tolist(),
            "ma_coeffs": self.ma_coeffs.tolist(),
            "sigma2": self.sigma2,
            "log_likelihood": self.log_likelihood,
            "aic": self.aic,
            "bic": self.bic,
            "n_eff": self.n_eff,
        }


def is_stationary(ar):
    """True when 1 - ar_1 z - ... - ar_p z^p has all roots outside the unit circle."""
    ar = np.asarray(ar, dtype=float)
    if ar.size == 0 or not np.any(ar):
        return True
    roots = np.roots(np.r_[-ar[::-1], 1.0])
    return bool(np.all(np.abs(roots) > 1.0))


def is_invertible(ma):
    ma = np.asarray(ma, dtype=float)
    if ma.size == 0 or not np.any(ma):
        return True
    roots = np.roots(np.r_[ma[::-1], 1.0])
    return bool(np.all(np.abs(roots) > 1.0))


def information_criteria(log_likelihood, k, n_eff):
    return 2 * k - 2 * log_likelihood, k * math.log(n_eff) - 2 * log_likelihood


def gaussian_loglik(sigma2, n_eff):
    sigma2 = max(sigma2, np.finfo(float).tiny)
    return -0.5 * n_eff * (math.log(2 * math.pi * sigma2) + 1.0)


def _split(theta, p, q, drift):
    return theta[:p], theta[p:p + q], (theta[p + q] if drift else 0.0)


def _css(theta, w, p, q, drift):
    ar, ma, mu = _split(theta, p, q, drift)
    if not (is_stationary(ar) and is_invertible(ma)):
        return _PENALTY
    e = kernels.css_residuals(w, np.ascontiguousarray(ar), np.ascontiguousarray(ma), float(mu))
    val = float(e @ e)
    return val if math.isfinite(val) else _PENALTY


def fit_arima(s, order, drift=False, n_cond=None):
    """Fit ARIMA(p, d, q) by conditional sum of squares.

    The d-fold differenced series is rescaled by its RMS before a Nelder-Mead
    search from the zero vector; coefficients are scale-free and the constant
    is mapped back afterwards. The first max(p, n_cond) differenced values are
    conditioned on and presample residuals are zero. Raises ConvergenceError
    (carrying the best model found) if the simplex has not collapsed after
    MAX_ITER steps.
    """
    p, d, q = (int(k) for k in order)
    y = s.values if isinstance(s, TimeSeries) else np.asarray(s, dtype=float)
    m = max(p, int(n_cond or 0))
    if len(y) - d - (m - p) <= p + q + 5:
        raise SizeError(f"ARIMA({p},{d},{q}) needs more than {p + q + 5 + d + m - p} observations")
    w = np.diff(y, n=d) if d else y.copy()
    scale = math.sqrt(float(np.mean(w * w))) or 1.0
    wz = np.ascontiguousarray(w[m - p:] / scale)
    k = p + q + int(drift)

    converged = True
    iterations = 0
    if k:
        simplex = np.vstack([np.zeros(k), INITIAL_STEP * np.eye(k)])
        res = minimize(_css, np.zeros(k), args=(wz, p, q, drift), method="Nelder-Mead",
                       options={"maxiter": MAX_ITER, "maxfev": 50 * MAX_ITER,
                                "xatol": SIMPLEX_TOL, "fatol": np.inf,
                                "initial_simplex": simplex})
        theta = res.x
        iterations = int(res.nit)
        converged = res.status == 0
    else:
        theta = np.zeros(0)

    ar, ma, mu_z = _split(theta, p, q, drift)
    resid = np.asarray(kernels.css_residuals(wz, np.ascontiguousarray(ar), np.ascontiguousarray(ma),
                                             float(mu_z))) * scale
    n_eff = len(wz) - p
    sigma2 = float(resid @ resid) / n_eff
    loglik = gaussian_loglik(sigma2, n_eff)
    model = ArimaModel(
        order=(p, d, q), drift=bool(drift), drift_coef=float(mu_z) * scale,
        ar_coeffs=np.array(ar), ma_coeffs=np.array(ma), sigma2=sigma2,
        log_likelihood=loglik, n_eff=n_eff, series=y.copy(), residuals=resid,
        times=list(s.times) if isinstance(s, TimeSeries) else [],
        period=s.period if isinstance(s, TimeSeries) else 12, iterations=iterations,
    )
    model.aic, model.bic = information_criteria(loglik, model.n_params, n_eff)
    if not converged:
        raise ConvergenceError(
            f"{model.label}: simplex did not converge in {MAX_ITER} iterations", best=model)
    return model


def choose_d(s, d_max=2, alpha=0.05):
    """Smallest d whose d-fold difference rejects a unit root; d_max if none does."""
    y = s.values if isinstance(s, TimeSeries) else np.asarray(s, dtype=float)
    for d in range(d_max + 1):
        w = np.diff(y, n=d) if d else y
        try:
            if adf_test(w).p_value < alpha:
                return d
        except SizeError:
            break
    return d_max


def auto_arima(s, p_max=5, q_max=5, d_max=2):
    """Grid search over (p, q) at the ADF-selected d, minimising AIC.

    A constant is always estimated: drift when d >= 1, the mean when d = 0.
    Every candidate is scored on the same sample (the first p_max differenced
    values are conditioned on) so their AICs are comparable; the winner is
    then refit on its own conditioning. Ties go to the smaller p + q, then the
    smaller p. Candidates that fail to converge or are too long are skipped.
    """
    d = choose_d(s, d_max)
    n = len(s) - d
    best = None
    trace = []
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            if n - p_max <= p + q + 5:
                continue
            try:
                model = fit_arima(s, (p, d, q), drift=True, n_cond=p_max)
            except ConvergenceError as exc:
                log.info("skipping ARIMA(%d,%d,%d): %s", p, d, q, exc)
                trace.append({"order": [p, d, q], "aic": None, "converged": False})
                continue
            trace.append({"order": [p, d, q], "aic": model.aic, "converged": True})
            key = (model.aic, p + q, p)
            if best is None or key < best[0]:
                best = (key, model)
    if best is None:
        raise SearchError(f"no ARIMA candidate converged at d={d}")
    order = best[1].order
    try:
        model = fit_arima(s, order, drift=True)
    except ConvergenceError as exc:
        model = exc.best
    model.candidates = trace
    return model


def forecast_arima(model, h):
    """Mean path: run the difference equation with zero future shocks, then integrate."""
    p, d, q = model.order
    y = model.series
    w = list(np.diff(y, n=d) if d else y)
    e = list(model.residuals)
    mu = model.drift_coef if model.drift else 0.0
    ar, ma = model.ar_coeffs, model.ma_coeffs
    out = []
    for _ in range(h):
        val = mu
        for i in range(p):
            val += ar[i] * (w[-1 - i] - mu)
        for j in range(q):
            if j < len(e):
                val += ma[j] * e[-1 - j]
        w.append(val)
        e.append(0.0)
        out.append(val)
    return undifference(np.array(out), difference_heads(y, d))
