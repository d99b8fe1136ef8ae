"""Descriptive statistics and dense linear algebra shared by the other modules.

Matrices are plain 2-D float arrays. Standard deviations use the n-1
denominator throughout; quartiles use linear interpolation between order
statistics.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateError, RankError, SizeError, SymmetryError

SYMMETRY_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    std: float
    min: float
    q25: float
    q50: float
    q75: float
    max: float

    def as_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True)
class CorrMatrix:
    labels: list
    values: np.ndarray

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("," + ",".join(self.labels) + "\n")
            for label, row in zip(self.labels, self.values):
                fh.write(label + "," + ",".join(f"{v:.10g}" for v in row) + "\n")


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix entries must be finite")
    return X


def describe(values):
    x = np.asarray(values, dtype=float).ravel()
    if x.size == 0:
        raise SizeError("describe needs at least one value")
    if not np.all(np.isfinite(x)):
        raise ValueError("describe needs finite values")
    q25, q50, q75 = np.percentile(x, [25, 50, 75])
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    return SummaryStats(int(x.size), float(x.mean()), std, float(x.min()),
                        float(q25), float(q50), float(q75), float(x.max()))


def _labels(labels, k):
    return list(labels) if labels is not None else [f"x{i}" for i in range(k)]


def _check_spread(X, labels):
    for j, label in enumerate(labels):
        col = X[:, j]
        if np.ptp(col) == 0:
            raise DegenerateError(f"column {label!r} is constant", column=label)


def correlation_matrix(X, labels=None):
    X = as_matrix(X)
    labels = _labels(labels, X.shape[1])
    if X.shape[0] < 2:
        raise SizeError("correlation needs at least 2 rows")
    _check_spread(X, labels)
    Z = X - X.mean(axis=0)
    norms = np.sqrt(np.sum(Z * Z, axis=0))
    R = (Z.T @ Z) / np.outer(norms, norms)
    R = np.clip((R + R.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(R, 1.0)
    return CorrMatrix(labels, R)


def standardize(X, labels=None):
    """Return ``(Z, means, stds)`` with each column of Z at mean 0, sample std 1."""
    X = as_matrix(X)
    labels = _labels(labels, X.shape[1])
    if X.shape[0] < 2:
        raise SizeError("standardize needs at least 2 rows")
    _check_spread(X, labels)
    means = X.mean(axis=0)
    stds = X.std(axis=0, ddof=1)
    return (X - means) / stds, means, stds


def least_squares_solve(X, y, rcond=1e-12):
    """Minimise ||X b - y||^2 through a Householder QR factorisation."""
    X = as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    n, k = X.shape
    if n < k:
        raise SizeError(f"underdetermined system: {n} rows < {k} columns")
    if y.shape[0] != n:
        raise SizeError(f"y has {y.shape[0]} entries for {n} rows")
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if k and (diag.max() == 0 or diag.min() <= rcond * diag.max() * max(n, k)):
        raise RankError(f"design matrix is rank deficient ({k} columns)")
    return np.linalg.solve(R, Q.T @ y) if k else np.zeros(0)


def symmetric_eigen(S, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigen decomposition, eigenpairs in descending order."""
    S = as_matrix(S)
    if S.shape[0] != S.shape[1]:
        raise SymmetryError(f"matrix is not square: {S.shape}")
    scale = max(1.0, float(np.abs(S).max())) if S.size else 1.0
    if not np.allclose(S, S.T, rtol=0, atol=SYMMETRY_TOL * scale):
        raise SymmetryError("matrix is not symmetric")
    S = np.ascontiguousarray((S + S.T) / 2.0)
    evals, V, _, _ = kernels.jacobi_eigen(S, tol, max_sweeps)
    order = np.argsort(-evals, kind="stable")
    return EigenResult(evals[order], V[:, order])


def iqr_outliers(values, k=1.5):
    x = np.asarray(values, dtype=float).ravel()
    q25, q75 = np.percentile(x, [25, 75])
    iqr = q75 - q25
    lo, hi = q25 - k * iqr, q75 + k * iqr
    return [int(i) for i in np.flatnonzero((x < lo) | (x > hi))]
