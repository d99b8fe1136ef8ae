from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError
from ..numerics import standardize

DIVERGENCE_RUN = 10


@dataclass(frozen=True)
class GdConfig:
    learning_rate: float = 0.02
    max_iterations: int = 2000
    scale_features: bool = True
    tolerance: float = 1e-10

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class GdResult:
    theta: np.ndarray           # intercept first, in the (possibly scaled) feature space
    means: np.ndarray
    stds: np.ndarray
    iterations: int
    converged: bool
    cost_trace: np.ndarray = field(repr=False)

    def design(self, X):
        X = np.asarray(X, dtype=float).reshape(len(X), -1)
        return np.column_stack([np.ones(len(X)), (X - self.means) / self.stds])

    def predict(self, X):
        return self.design(X) @ self.theta

    def raw_coefficients(self):
        """Coefficients mapped back to the unscaled predictors, intercept first."""
        slopes = self.theta[1:] / self.stds
        return np.r_[self.theta[0] - slopes @ self.means, slopes]


def cost(theta, X, y):
    r = X @ theta - y
    return (r @ r) / (2 * len(y))


def gradient(theta, X, y):
    return X.T @ (X @ theta - y) / len(y)


def gradient_descent_fit(X, y, config=GdConfig()):
    """Batch gradient descent on the half mean squared error, starting from zero.

    ``X`` holds predictors only; an intercept column is prepended after optional
    standardisation. Raises DivergenceError when the cost rises for
    DIVERGENCE_RUN consecutive iterations.
    """
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float).reshape(len(y), -1)
    k = X.shape[1]
    if config.scale_features and k:
        _, means, stds = standardize(X)
    else:
        means, stds = np.zeros(k), np.ones(k)
    result = GdResult(np.zeros(k + 1), means, stds, 0, False, np.zeros(0))
    D = result.design(X)

    theta = np.zeros(k + 1)
    costs = [cost(theta, D, y)]
    rising = 0
    converged = False
    it = 0
    for it in range(1, config.max_iterations + 1):
        step = config.learning_rate * gradient(theta, D, y)
        theta = theta - step
        costs.append(cost(theta, D, y))
        rising = rising + 1 if costs[-1] > costs[-2] else 0
        if rising >= DIVERGENCE_RUN or not np.isfinite(costs[-1]):
            raise DivergenceError(
                f"gradient descent diverged at iteration {it}; "
                f"try a learning rate below {config.learning_rate}")
        if np.max(np.abs(step)) < config.tolerance:
            converged = True
            break
    result.theta = theta
    result.iterations = it
    result.converged = converged
    result.cost_trace = np.array(costs)
    return result
