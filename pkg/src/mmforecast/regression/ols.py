import csv
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import SizeError
from ..numerics import as_matrix, least_squares_solve


@dataclass
class RegressionFit:
    labels: list
    coefficients: np.ndarray
    std_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    r2: float
    adj_r2: float
    residual_std: float
    n_obs: int
    df_resid: int

    def predict(self, X):
        return as_matrix(X) @ self.coefficients

    def table(self):
        rows = []
        for lab, b, se, t, p in zip(self.labels, self.coefficients, self.std_errors,
                                    self.t_stats, self.p_values):
            rows.append({"variable": lab, "coefficient": float(b), "std_error": float(se),
                         "t_stat": float(t), "p_value": float(p),
                         "significant_05": bool(p < 0.05), "significant_10": bool(p < 0.10)})
        return rows

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["variable", "coefficient", "p_value", "significant_0.05", "significant_0.10"])
            for row in self.table():
                w.writerow([row["variable"], f"{row['coefficient']:.10g}", f"{row['p_value']:.6g}",
                            "yes" if row["significant_05"] else "no",
                            "yes" if row["significant_10"] else "no"])


def add_intercept(X):
    X = as_matrix(X) if np.size(X) else np.zeros((len(X), 0))
    return np.column_stack([np.ones(X.shape[0]), X])


def _has_intercept(X):
    return any(np.all(X[:, j] == 1.0) for j in range(X.shape[1]))


def ols_fit(X, y, labels=None):
    """Least squares with classical standard errors and two-sided t-test p-values.

    ``X`` should already carry its intercept column (see :func:`add_intercept`).
    """
    X = as_matrix(X)
    y = np.asarray(y, dtype=float).ravel()
    n, k = X.shape
    if n <= k:
        raise SizeError(f"OLS needs more rows than columns, got {n}x{k}")
    beta = least_squares_solve(X, y)
    resid = y - X @ beta
    df = n - k
    sigma2 = resid @ resid / df
    _, R = np.linalg.qr(X)
    rinv = np.linalg.inv(R)
    se = np.sqrt(sigma2 * np.sum(rinv * rinv, axis=1))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, beta / se, np.sign(beta) * np.inf)
    p = 2.0 * stats.t.sf(np.abs(t), df)
    p = np.where(np.isnan(p), 1.0, p)

    intercept = _has_intercept(X)
    centre = y.mean() if intercept else 0.0
    sst = np.sum((y - centre) ** 2)
    r2 = 1.0 - (resid @ resid) / sst if sst > 0 else 1.0
    dof_total = n - 1 if intercept else n
    adj = 1.0 - (1.0 - r2) * dof_total / df
    if labels is None:
        labels = [f"x{i}" for i in range(k)]
    return RegressionFit(list(labels), beta, se, t, p, float(r2), float(adj),
                         float(np.sqrt(sigma2)), n, df)
