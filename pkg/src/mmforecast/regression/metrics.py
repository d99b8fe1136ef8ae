import numpy as np

from ..errors import SizeError


def rmse(predicted, actual):
    p = np.asarray(predicted, dtype=float).ravel()
    a = np.asarray(actual, dtype=float).ravel()
    if p.size != a.size or p.size == 0:
        raise SizeError(f"rmse needs equal nonzero lengths, got {p.size} and {a.size}")
    return float(np.sqrt(np.mean((p - a) ** 2)))
