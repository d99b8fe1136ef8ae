"""Principal component analysis on the covariance (or correlation) matrix."""
import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SizeError
from .numerics import as_matrix, standardize, symmetric_eigen


@dataclass
class PcaResult:
    component_labels: list
    variable_labels: list
    eigenvalues: np.ndarray
    variance_ratios: np.ndarray
    loadings: np.ndarray       # columns are components
    standardized: bool
    means: np.ndarray
    scales: np.ndarray

    @property
    def cumulative_ratios(self):
        return np.cumsum(self.variance_ratios)

    def dominant_variables(self):
        """Variable with the largest absolute loading on each component."""
        return [self.variable_labels[i] for i in np.argmax(np.abs(self.loadings), axis=0)]

    def table(self):
        return [
            {"component": c, "dominant_variable": v, "eigenvalue": float(e),
             "variance_ratio": float(r), "cumulative_ratio": float(cr)}
            for c, v, e, r, cr in zip(self.component_labels, self.dominant_variables(),
                                      self.eigenvalues, self.variance_ratios,
                                      self.cumulative_ratios)
        ]

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["component", "dominant_variable", "eigenvalue", "variance_ratio",
                        "cumulative_ratio"])
            for row in self.table():
                w.writerow([row["component"], row["dominant_variable"],
                            f"{row['eigenvalue']:.10g}", f"{row['variance_ratio']:.10g}",
                            f"{row['cumulative_ratio']:.10g}"])


def _fix_signs(V):
    # largest-magnitude entry of each column made positive
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def fit_pca(X, standardized=False, labels=None):
    X = as_matrix(X)
    n, k = X.shape
    if not n > k >= 1:
        raise SizeError(f"PCA needs more rows than columns, got {n}x{k}")
    labels = list(labels) if labels is not None else [f"x{i}" for i in range(k)]
    if standardized:
        Z, means, scales = standardize(X, labels)
    else:
        means = X.mean(axis=0)
        scales = np.ones(k)
        Z = X - means
    cov = Z.T @ Z / (n - 1)
    eig = symmetric_eigen(cov)
    evals = np.where(eig.eigenvalues < 0, 0.0, eig.eigenvalues)
    total = evals.sum()
    ratios = evals / total if total > 0 else np.zeros(k)
    return PcaResult([f"PC{i + 1}" for i in range(k)], labels, evals, ratios,
                     _fix_signs(eig.eigenvectors), standardized, means, scales)


def project(result, X, k):
    X = as_matrix(X)
    cols = result.loadings.shape[0]
    if X.shape[1] != cols:
        raise DimensionError(f"X has {X.shape[1]} columns, PCA was fit on {cols}")
    if not 1 <= k <= cols:
        raise DimensionError(f"k must lie in [1, {cols}], got {k}")
    return ((X - result.means) / result.scales) @ result.loadings[:, :k]


def reconstruct(result, scores):
    k = scores.shape[1]
    return scores @ result.loadings[:, :k].T * result.scales + result.means
