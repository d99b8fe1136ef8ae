"""Regression models: OLS, gradient descent, lasso, backward subset selection."""
from .gd import GdConfig, GdResult, cost, gradient, gradient_descent_fit
from .lasso import LassoPath, default_lambdas, fold_indices, lambda_max, lasso_cv, lasso_path
from .metrics import rmse
from .ols import RegressionFit, add_intercept, ols_fit
from .subset import SubsetResult, backward_subset, refit_subset

__all__ = [
    "GdConfig", "GdResult", "LassoPath", "RegressionFit", "SubsetResult", "add_intercept",
    "backward_subset", "cost", "default_lambdas", "fold_indices", "gradient",
    "gradient_descent_fit", "lambda_max", "lasso_cv", "lasso_path", "ols_fit",
    "refit_subset", "rmse",
]
