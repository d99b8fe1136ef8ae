"""Lasso by cyclic coordinate descent along a descending lambda grid.

Objective per lambda: (1/2n) ||y - ybar - Z b||^2 + lambda * ||b||_1 where Z is
the column-standardised predictor matrix. The intercept is ybar, unpenalised.
"""
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import ConvergenceError, SizeError
from ..numerics import standardize
from .metrics import rmse

TOL = 1e-7
MAX_SWEEPS = 10_000
DEFAULT_FOLDS = 5


def default_lambdas(n=100, high=1e10, low=0.002):
    return np.logspace(np.log10(high), np.log10(low), n)


@dataclass
class LassoPath:
    lambdas: np.ndarray
    coefs: np.ndarray           # (n_lambdas, n_features), standardised scale
    intercept: float
    means: np.ndarray
    stds: np.ndarray
    labels: list
    sweeps: np.ndarray = field(repr=False, default=None)
    cv_mean_errors: np.ndarray = None
    cv_std_errors: np.ndarray = None
    best_lambda: float = None
    folds: int = None

    @property
    def best_index(self):
        if self.best_lambda is None:
            raise ValueError("path was not cross-validated")
        return int(np.flatnonzero(self.lambdas == self.best_lambda)[0])

    @property
    def best_coefs(self):
        return self.coefs[self.best_index]

    def raw_coefficients(self, index):
        """Intercept and slopes on the original predictor scale."""
        slopes = self.coefs[index] / self.stds + 0.0
        return np.r_[self.intercept - slopes @ self.means, slopes]

    def predict(self, X, index):
        Z = (np.asarray(X, dtype=float) - self.means) / self.stds
        return self.intercept + Z @ self.coefs[index]

    def n_zero(self, index):
        return int(np.sum(self.coefs[index] == 0.0))


def lambda_max(X, y):
    Z, _, _ = standardize(X)
    yc = np.asarray(y, dtype=float) - np.mean(y)
    return float(np.max(np.abs(Z.T @ yc)) / len(yc))


def lasso_path(X, y, lambdas=None, labels=None, tol=TOL, max_sweeps=MAX_SWEEPS):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    lambdas = default_lambdas() if lambdas is None else np.asarray(lambdas, dtype=float).ravel()
    if lambdas.size < 1:
        raise ValueError("need at least one lambda")
    if np.any(lambdas < 0):
        raise ValueError("lambdas must be non-negative")
    if lambdas.size > 1 and np.any(np.diff(lambdas) >= 0):
        raise ValueError("lambdas must be strictly descending")
    labels = list(labels) if labels is not None else [f"x{i}" for i in range(X.shape[1])]
    Z, means, stds = standardize(X, labels)
    ybar = float(y.mean())
    coefs, sweeps, converged = kernels.lasso_cd(
        np.ascontiguousarray(Z), np.ascontiguousarray(y - ybar),
        np.ascontiguousarray(lambdas), tol, max_sweeps)
    if not np.all(converged):
        bad = int(np.flatnonzero(~np.asarray(converged))[0])
        raise ConvergenceError(
            f"coordinate descent did not converge at lambda={lambdas[bad]:.6g} "
            f"within {max_sweeps} sweeps", best=np.asarray(coefs)[bad])
    return LassoPath(lambdas, np.asarray(coefs) + 0.0, ybar, means, stds, labels,
                     np.asarray(sweeps))


def fold_indices(n, folds, seed):
    order = np.random.default_rng(seed).permutation(n)
    return np.array_split(order, folds)


def lasso_cv(X, y, lambdas=None, folds=DEFAULT_FOLDS, seed=0, labels=None,
             tol=TOL, max_sweeps=MAX_SWEEPS):
    """K-fold cross-validated path; best lambda minimises mean validation RMSE.

    Ties resolve to the larger lambda. The returned path is refit on all rows.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    lambdas = default_lambdas() if lambdas is None else np.asarray(lambdas, dtype=float).ravel()
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if len(y) < folds:
        raise SizeError(f"{len(y)} rows cannot fill {folds} folds")
    parts = fold_indices(len(y), folds, seed)
    errors = np.empty((folds, len(lambdas)))
    for f, val in enumerate(parts):
        if len(val) < 2 or len(y) - len(val) < 2:
            raise SizeError(f"fold {f} has fewer than 2 rows")
        train = np.setdiff1d(np.arange(len(y)), val)
        path = lasso_path(X[train], y[train], lambdas, labels, tol, max_sweeps)
        for i in range(len(lambdas)):
            errors[f, i] = rmse(path.predict(X[val], i), y[val])
    mean = errors.mean(axis=0)
    se = errors.std(axis=0, ddof=1) / np.sqrt(folds)
    best = int(np.argmin(mean))
    path = lasso_path(X, y, lambdas, labels, tol, max_sweeps)
    path.cv_mean_errors = mean
    path.cv_std_errors = se
    path.best_lambda = float(lambdas[best])
    path.folds = folds
    return path
