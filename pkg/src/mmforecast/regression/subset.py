from dataclasses import dataclass

import numpy as np

from .metrics import rmse
from .ols import add_intercept, ols_fit

CRITERIA = ("validation_rmse", "adj_r2")


@dataclass
class SubsetResult:
    rows: list          # one dict per subset size, ascending
    best_size: int
    eliminated: list    # features in removal order
    criterion: str

    @property
    def best_features(self):
        return self.row(self.best_size)["features"]

    def row(self, size):
        return next(r for r in self.rows if r["size"] == size)


def _score(X_tr, y_tr, X_va, y_va, cols):
    fit = ols_fit(add_intercept(X_tr[:, cols]), y_tr)
    pred = fit.predict(add_intercept(X_va[:, cols]))
    return rmse(pred, y_va), fit.adj_r2


def _better(a, b, criterion):
    # a, b are (validation_rmse, adj_r2)
    if criterion == "validation_rmse":
        return a[0] < b[0]
    return a[1] > b[1]


def backward_subset(X_train, y_train, X_val, y_val, labels=None, criterion="validation_rmse"):
    """Greedy backward elimination producing a nested chain of feature sets.

    At each step the feature whose removal gives the best criterion value is
    dropped. Ties keep the earlier feature in column order.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}")
    X_train = np.asarray(X_train, dtype=float)
    X_val = np.asarray(X_val, dtype=float)
    k = X_train.shape[1]
    if k < 2:
        raise ValueError("backward subset selection needs at least 2 features")
    labels = list(labels) if labels is not None else [f"x{i}" for i in range(k)]

    current = list(range(k))
    score = _score(X_train, y_train, X_val, y_val, current)
    rows = [{"size": k, "features": [labels[j] for j in current],
             "validation_rmse": score[0], "adj_r2": score[1]}]
    eliminated = []
    while len(current) > 1:
        best = None
        for j in current:
            cols = [c for c in current if c != j]
            s = _score(X_train, y_train, X_val, y_val, cols)
            if best is None or _better(s, best[1], criterion):
                best = (j, s)
        current.remove(best[0])
        eliminated.append(labels[best[0]])
        rows.append({"size": len(current), "features": [labels[j] for j in current],
                     "validation_rmse": best[1][0], "adj_r2": best[1][1]})
    rows.sort(key=lambda r: r["size"])
    if criterion == "validation_rmse":
        best_row = min(rows, key=lambda r: (r["validation_rmse"], r["size"]))
    else:
        best_row = max(rows, key=lambda r: (r["adj_r2"], -r["size"]))
    return SubsetResult(rows, best_row["size"], eliminated, criterion)


def refit_subset(result, X_train, y_train, labels):
    cols = [labels.index(f) for f in result.best_features]
    return cols, ols_fit(add_intercept(np.asarray(X_train)[:, cols]), y_train,
                         ["(Intercept)"] + result.best_features)
