"""Hot inner loops, each with a numba and a pure-numpy implementation.

The public names (``jacobi_eigen``, ``durbin_levinson``, ``css_residuals``,
``hw_filter``, ``hw_sse_grid``, ``lasso_cd``) are bound to one backend at
import time, see :mod:`mmforecast._accel`. Both implementations are kept in
``IMPLEMENTATIONS`` so tests and the benchmark can call either directly.
"""
import numpy as np
from scipy.signal import lfilter

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------- Jacobi eigen


def _jacobi_eigen_loop(S, tol, max_sweeps):
    n = S.shape[0]
    A = S.copy()
    V = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += A[i, j] * A[i, j]
    scale = np.sqrt(scale)
    if scale == 0.0:
        scale = 1.0
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j] * A[i, j]
        if np.sqrt(off) < tol * scale:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    off = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off += A[i, j] * A[i, j]
    evals = np.empty(n)
    for i in range(n):
        evals[i] = A[i, i]
    return evals, V, np.sqrt(off) / scale, sweeps


def _jacobi_eigen_numpy(S, tol, max_sweeps):
    A = np.array(S, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A) or 1.0
    offdiag = ~np.eye(n, dtype=bool)
    sweeps = 0
    for _ in range(max_sweeps):
        if np.sqrt(np.sum(A[offdiag] ** 2)) < tol * scale:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cols = A[:, [p, q]]
                A[:, p] = c * cols[:, 0] - s * cols[:, 1]
                A[:, q] = s * cols[:, 0] + c * cols[:, 1]
                rows = A[[p, q], :]
                A[p, :] = c * rows[0] - s * rows[1]
                A[q, :] = s * rows[0] + c * rows[1]
                A[p, q] = A[q, p] = 0.0
                vc = V[:, [p, q]]
                V[:, p] = c * vc[:, 0] - s * vc[:, 1]
                V[:, q] = s * vc[:, 0] + c * vc[:, 1]
    off = np.sqrt(np.sum(A[offdiag] ** 2)) / scale
    return np.diag(A).copy(), V, off, sweeps


# ------------------------------------------------------------ Durbin-Levinson


def _durbin_levinson_loop(r, max_lag):
    pacf = np.zeros(max_lag)
    phi = np.zeros(max_lag)
    prev = np.zeros(max_lag)
    for k in range(1, max_lag + 1):
        num = r[k]
        den = 1.0
        for j in range(1, k):
            num -= prev[j - 1] * r[k - j]
            den -= prev[j - 1] * r[j]
        phikk = num / den
        for j in range(1, k):
            phi[j - 1] = prev[j - 1] - phikk * prev[k - j - 1]
        phi[k - 1] = phikk
        pacf[k - 1] = phikk
        for j in range(k):
            prev[j] = phi[j]
    return pacf


def _durbin_levinson_numpy(r, max_lag):
    r = np.asarray(r, dtype=float)
    pacf = np.zeros(max_lag)
    phi = np.zeros(0)
    for k in range(1, max_lag + 1):
        num = r[k] - phi @ r[k - 1:0:-1] if k > 1 else r[1]
        den = 1.0 - phi @ r[1:k] if k > 1 else 1.0
        phikk = num / den
        phi = np.append(phi - phikk * phi[::-1], phikk)
        pacf[k - 1] = phikk
    return pacf


# ------------------------------------------------------------- CSS residuals


def _css_residuals_loop(w, ar, ma, mu):
    n = w.shape[0]
    p = ar.shape[0]
    q = ma.shape[0]
    m = n - p
    e = np.zeros(m)
    for t in range(p, n):
        val = w[t] - mu
        for i in range(p):
            val -= ar[i] * (w[t - i - 1] - mu)
        for j in range(q):
            k = t - p - j - 1
            if k >= 0:
                val -= ma[j] * e[k]
        e[t - p] = val
    return e


def _css_residuals_numpy(w, ar, ma, mu):
    w = np.asarray(w, dtype=float)
    p = len(ar)
    z = w - mu
    u = np.convolve(z, np.r_[1.0, -np.asarray(ar, dtype=float)])[p:len(z)]
    return lfilter([1.0], np.r_[1.0, np.asarray(ma, dtype=float)], u)


# --------------------------------------------------------------- Holt-Winters


def _hw_filter_loop(y, period, alpha, beta, gamma, level0, trend0, season0, multiplicative):
    n = y.shape[0]
    season = season0.copy()
    level = level0
    trend = trend0
    sse = 0.0
    for t in range(period, n):
        i = t % period
        if multiplicative:
            yhat = (level + trend) * season[i]
        else:
            yhat = level + trend + season[i]
        err = y[t] - yhat
        sse += err * err
        if multiplicative:
            new_level = alpha * (y[t] / season[i]) + (1.0 - alpha) * (level + trend)
        else:
            new_level = alpha * (y[t] - season[i]) + (1.0 - alpha) * (level + trend)
        trend = beta * (new_level - level) + (1.0 - beta) * trend
        if multiplicative:
            season[i] = gamma * (y[t] / new_level) + (1.0 - gamma) * season[i]
        else:
            season[i] = gamma * (y[t] - new_level) + (1.0 - gamma) * season[i]
        level = new_level
    return sse, level, trend, season


def _hw_filter_numpy(y, period, alpha, beta, gamma, level0, trend0, season0, multiplicative):
    sse, level, trend, season = _hw_sse_grid_numpy(
        y, period, np.array([alpha]), np.array([beta]), np.array([gamma]),
        level0, trend0, season0, multiplicative, True)
    return sse[0], level[0], trend[0], season[0]


def _hw_sse_grid_loop(y, period, alphas, betas, gammas, level0, trend0, season0, multiplicative):
    m = alphas.shape[0]
    out = np.empty(m)
    for k in range(m):
        sse, _, _, _ = _hw_filter_jit(y, period, alphas[k], betas[k], gammas[k],
                                      level0, trend0, season0, multiplicative)
        out[k] = sse
    return out


def _hw_sse_grid_numpy(y, period, alphas, betas, gammas, level0, trend0, season0,
                       multiplicative, return_states=False):
    # one time loop, vectorised over parameter triples
    m = len(alphas)
    level = np.full(m, float(level0))
    trend = np.full(m, float(trend0))
    season = np.tile(np.asarray(season0, dtype=float), (m, 1))
    sse = np.zeros(m)
    with np.errstate(all="ignore"):
        for t in range(period, len(y)):
            i = t % period
            s = season[:, i]
            if multiplicative:
                err = y[t] - (level + trend) * s
                new_level = alphas * (y[t] / s) + (1.0 - alphas) * (level + trend)
            else:
                err = y[t] - (level + trend + s)
                new_level = alphas * (y[t] - s) + (1.0 - alphas) * (level + trend)
            sse += err * err
            trend = betas * (new_level - level) + (1.0 - betas) * trend
            if multiplicative:
                season[:, i] = gammas * (y[t] / new_level) + (1.0 - gammas) * s
            else:
                season[:, i] = gammas * (y[t] - new_level) + (1.0 - gammas) * s
            level = new_level
    if return_states:
        return sse, level, trend, season
    return sse


# ------------------------------------------------------------------ Lasso CD


def _lasso_cd_loop(X, y, lambdas, tol, max_sweeps):
    n, p = X.shape
    nl = lambdas.shape[0]
    coefs = np.zeros((nl, p))
    sweeps = np.zeros(nl, dtype=np.int64)
    converged = np.zeros(nl, dtype=np.bool_)
    beta = np.zeros(p)
    resid = y.copy()
    sq = np.zeros(p)
    for j in range(p):
        acc = 0.0
        for i in range(n):
            acc += X[i, j] * X[i, j]
        sq[j] = acc / n
    for li in range(nl):
        lam = lambdas[li]
        for sweep in range(max_sweeps):
            max_change = 0.0
            for j in range(p):
                if sq[j] == 0.0:
                    continue
                rho = 0.0
                for i in range(n):
                    rho += X[i, j] * resid[i]
                rho = rho / n + sq[j] * beta[j]
                if rho > lam:
                    new = (rho - lam) / sq[j]
                elif rho < -lam:
                    new = (rho + lam) / sq[j]
                else:
                    new = 0.0
                delta = new - beta[j]
                if delta != 0.0:
                    for i in range(n):
                        resid[i] -= delta * X[i, j]
                    beta[j] = new
                    if abs(delta) > max_change:
                        max_change = abs(delta)
            sweeps[li] = sweep + 1
            if max_change < tol:
                converged[li] = True
                break
        for j in range(p):
            coefs[li, j] = beta[j]
    return coefs, sweeps, converged


def _lasso_cd_numpy(X, y, lambdas, tol, max_sweeps):
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    gram = X.T @ X / n
    xty = X.T @ y / n
    sq = np.diag(gram).copy()
    nl = len(lambdas)
    coefs = np.zeros((nl, p))
    sweeps = np.zeros(nl, dtype=np.int64)
    converged = np.zeros(nl, dtype=bool)
    beta = np.zeros(p)
    for li, lam in enumerate(lambdas):
        for sweep in range(max_sweeps):
            max_change = 0.0
            for j in range(p):
                if sq[j] == 0.0:
                    continue
                rho = xty[j] - gram[j] @ beta + sq[j] * beta[j]
                new = np.sign(rho) * max(abs(rho) - lam, 0.0) / sq[j]
                delta = abs(new - beta[j])
                beta[j] = new
                max_change = max(max_change, delta)
            sweeps[li] = sweep + 1
            if max_change < tol:
                converged[li] = True
                break
        coefs[li] = beta
    return coefs, sweeps, converged


_hw_filter_jit = njit(_hw_filter_loop)

IMPLEMENTATIONS = {
    "numba": {
        "jacobi_eigen": njit(_jacobi_eigen_loop),
        "durbin_levinson": njit(_durbin_levinson_loop),
        "css_residuals": njit(_css_residuals_loop),
        "hw_filter": _hw_filter_jit,
        "hw_sse_grid": njit(_hw_sse_grid_loop),
        "lasso_cd": njit(_lasso_cd_loop),
    },
    "numpy": {
        "jacobi_eigen": _jacobi_eigen_numpy,
        "durbin_levinson": _durbin_levinson_numpy,
        "css_residuals": _css_residuals_numpy,
        "hw_filter": _hw_filter_numpy,
        "hw_sse_grid": _hw_sse_grid_numpy,
        "lasso_cd": _lasso_cd_numpy,
    },
}

_active = IMPLEMENTATIONS["numba" if USE_NUMBA else "numpy"]

jacobi_eigen = _active["jacobi_eigen"]
durbin_levinson = _active["durbin_levinson"]
css_residuals = _active["css_residuals"]
hw_filter = _active["hw_filter"]
hw_sse_grid = _active["hw_sse_grid"]
lasso_cd = _active["lasso_cd"]
