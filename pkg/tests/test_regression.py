import math

import numpy as np
import pytest
import statsmodels.api as sm
from hypothesis import given, settings, strategies as st

from mmforecast.errors import ConvergenceError, DivergenceError, RankError, SizeError
from mmforecast.regression import (GdConfig, add_intercept, backward_subset, cost,
                                   default_lambdas, gradient, gradient_descent_fit, lambda_max,
                                   lasso_cv, lasso_path, ols_fit, refit_subset, rmse)


def zscore(X):
    X = np.asarray(X, dtype=float).reshape(len(X), -1)
    return (X - X.mean(axis=0)) / X.std(axis=0, ddof=1)


def problem(seed, n=200, k=4):
    r = np.random.default_rng(seed)
    X = r.normal(size=(n, k)) * r.uniform(1, 10, size=k) + r.uniform(-5, 5, size=k)
    y = 10 + X @ r.normal(size=k) + r.normal(size=n)
    return X, y


class TestOls:
    def test_exact_line(self):
        x = np.arange(8.0)
        fit = ols_fit(add_intercept(x), 3 + 2 * x)
        np.testing.assert_allclose(fit.coefficients, [3, 2], atol=1e-12)
        assert fit.r2 == pytest.approx(1.0)

    def test_hand_dataset(self):
        x = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        y = np.array([2.6, 4.1, 5.9, 8.3, 9.8, 12.7])
        n = 6
        sxx = np.sum((x - x.mean()) ** 2)
        sxy = np.sum((x - x.mean()) * (y - y.mean()))
        b1 = sxy / sxx
        b0 = y.mean() - b1 * x.mean()
        s2 = np.sum((y - b0 - b1 * x) ** 2) / (n - 2)
        se = [math.sqrt(s2 * (1 / n + x.mean() ** 2 / sxx)), math.sqrt(s2 / sxx)]
        fit = ols_fit(add_intercept(x), y)
        np.testing.assert_allclose(fit.coefficients, [b0, b1], atol=1e-8)
        np.testing.assert_allclose(fit.std_errors, se, atol=1e-8)
        np.testing.assert_allclose(fit.t_stats, [b0 / se[0], b1 / se[1]], rtol=1e-8)

    def test_matches_statsmodels(self):
        X, y = problem(1, n=40)
        fit = ols_fit(add_intercept(X), y)
        ref = sm.OLS(y, sm.add_constant(X)).fit()
        np.testing.assert_allclose(fit.coefficients, ref.params, rtol=1e-10)
        np.testing.assert_allclose(fit.std_errors, ref.bse, rtol=1e-10)
        np.testing.assert_allclose(fit.p_values, ref.pvalues, atol=1e-12)
        assert fit.r2 == pytest.approx(ref.rsquared)
        assert fit.adj_r2 == pytest.approx(ref.rsquared_adj)
        assert fit.adj_r2 <= fit.r2

    def test_null_slope_calibration(self):
        # under the null the slope p-value exceeds 0.05 with probability 0.95
        n_seeds = 2000
        hits = 0
        for seed in range(n_seeds):
            r = np.random.default_rng(seed)
            fit = ols_fit(add_intercept(r.normal(size=200)), r.normal(size=200))
            hits += fit.p_values[1] > 0.05
        se = math.sqrt(0.95 * 0.05 / n_seeds)
        assert abs(hits / n_seeds - 0.95) < 3 * se

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 100_000))
    def test_row_permutation(self, seed):
        X, y = problem(seed, n=30, k=3)
        perm = np.random.default_rng(seed + 1).permutation(30)
        a = ols_fit(add_intercept(X), y).coefficients
        b = ols_fit(add_intercept(X[perm]), y[perm]).coefficients
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * np.abs(a).max())

    def test_errors(self):
        x = np.arange(10.0)
        with pytest.raises(RankError):
            ols_fit(add_intercept(np.column_stack([x, 2 * x])), x)
        with pytest.raises(SizeError):
            ols_fit(add_intercept(x[:2]), x[:2])

    def test_csv(self, tmp_path):
        X, y = problem(2, n=30, k=2)
        ols_fit(add_intercept(X), y, ["(Intercept)", "a", "b"]).to_csv(tmp_path / "o.csv")
        lines = (tmp_path / "o.csv").read_text().splitlines()
        assert lines[0] == "variable,coefficient,p_value,significant_0.05,significant_0.10"
        assert [line.split(",")[0] for line in lines[1:]] == ["(Intercept)", "a", "b"]


class TestGradientDescent:
    def test_defaults(self):
        cfg = GdConfig()
        assert (cfg.learning_rate, cfg.max_iterations, cfg.scale_features) == (0.02, 2000, True)
        with pytest.raises(ValueError):
            GdConfig(learning_rate=0)
        with pytest.raises(ValueError):
            GdConfig(max_iterations=0)

    def test_mean_only(self):
        y = np.random.default_rng(3).normal(5, 2, size=50)
        res = gradient_descent_fit(np.zeros((50, 0)), y)
        assert res.theta[0] == pytest.approx(y.mean(), abs=1e-6)

    def test_matches_ols(self):
        X, y = problem(4)
        res = gradient_descent_fit(X, y)
        ref = ols_fit(add_intercept(zscore(X)), y).coefficients
        assert np.max(np.abs(res.theta - ref)) < 1e-3
        np.testing.assert_allclose(res.raw_coefficients(),
                                   ols_fit(add_intercept(X), y).coefficients, rtol=1e-3)

    def test_finite_difference_gradient(self):
        X, y = problem(5, n=50)
        D = add_intercept(zscore(X))
        r = np.random.default_rng(6)
        for _ in range(10):
            theta = r.normal(size=D.shape[1]) * 5
            h = 1e-5
            num = np.array([(cost(theta + h * e, D, y) - cost(theta - h * e, D, y)) / (2 * h)
                            for e in np.eye(len(theta))])
            ana = gradient(theta, D, y)
            assert np.linalg.norm(ana - num) / np.linalg.norm(ana) < 1e-5

    def test_divergence(self):
        X, y = problem(7)
        with pytest.raises(DivergenceError, match="learning rate"):
            gradient_descent_fit(X, y, GdConfig(learning_rate=5.0))

    def test_cost_nonincreasing_at_default_rate(self):
        X, y = problem(8)
        trace = gradient_descent_fit(X, y).cost_trace
        assert np.all(np.diff(trace) <= 1e-9 * trace[0])


def soft_threshold(z, lam):
    return np.sign(z) * max(abs(z) - lam, 0.0)


class TestLasso:
    def test_default_grid(self):
        grid = default_lambdas()
        assert len(grid) == 100
        assert grid[0] == pytest.approx(1e10) and grid[-1] == pytest.approx(0.002)
        assert np.allclose(np.diff(np.log(grid)), np.log(0.002 / 1e10) / 99)

    def test_zero_lambda_is_ols(self):
        X, y = problem(9, k=5)
        path = lasso_path(X, y, [0.0])
        ref = ols_fit(add_intercept(zscore(X)), y).coefficients
        np.testing.assert_allclose(path.coefs[0], ref[1:], atol=1e-6)
        assert path.intercept == pytest.approx(ref[0], abs=1e-9)
        np.testing.assert_allclose(path.raw_coefficients(0),
                                   ols_fit(add_intercept(X), y).coefficients, rtol=1e-6)

    def test_lambda_max_zeroes_everything(self):
        X, y = problem(10, k=5)
        lm = lambda_max(X, y)
        path = lasso_path(X, y, [lm, lm * 0.999])
        assert np.all(path.coefs[0] == 0.0)
        assert np.any(path.coefs[1] != 0.0)
        assert np.all(lasso_path(X, y).coefs[0] == 0.0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000), st.floats(0.0, 2.0))
    def test_univariate_soft_threshold(self, seed, lam):
        r = np.random.default_rng(seed)
        x = r.normal(size=60)
        y = 0.8 * x + r.normal(size=60)
        z = zscore(x).ravel()
        n = len(y)
        want = soft_threshold(z @ (y - y.mean()) / n, lam) / (z @ z / n)
        got = lasso_path(x[:, None], y, [lam]).coefs[0, 0]
        assert got == pytest.approx(want, abs=1e-10)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 100_000))
    def test_l1_norm_monotone(self, seed):
        X, y = problem(seed, n=80, k=5)
        path = lasso_path(X, y, np.logspace(2, -3, 40))
        l1 = np.abs(path.coefs).sum(axis=1)
        assert np.all(np.diff(l1) >= -1e-8)
        assert np.count_nonzero(path.coefs[0]) <= np.count_nonzero(path.coefs[-1])

    def test_grid_validation(self):
        X, y = problem(11)
        with pytest.raises(ValueError):
            lasso_path(X, y, [1.0, 2.0])
        with pytest.raises(ValueError):
            lasso_path(X, y, [])

    def test_convergence_error_names_lambda(self):
        X, y = problem(12)
        X[:, 1] = X[:, 0] + 1e-3 * X[:, 1]
        with pytest.raises(ConvergenceError, match="lambda="):
            lasso_path(X, y, [1e-3], max_sweeps=2)

    def test_cv_defaults_and_determinism(self):
        X, y = problem(13, n=60)
        a = lasso_cv(X, y, seed=4)
        b = lasso_cv(X, y, seed=4)
        assert a.folds == 5 and len(a.cv_mean_errors) == 100
        assert a.best_lambda == b.best_lambda
        np.testing.assert_array_equal(a.cv_mean_errors, b.cv_mean_errors)

    def test_cv_tie_goes_to_larger_lambda(self):
        X, y = problem(14, n=60)
        path = lasso_cv(X, y, np.array([1e9, 1e8, 1e7]))
        assert path.best_lambda == 1e9

    def test_cv_errors(self):
        X, y = problem(15, n=8)
        with pytest.raises(SizeError):
            lasso_cv(X[:3], y[:3])
        with pytest.raises(SizeError):
            lasso_cv(X, y, folds=5)
        with pytest.raises(ValueError):
            lasso_cv(X, y, folds=1)

    def test_cv_pure_noise(self):
        # the minimum-CV rule can keep a few noise slopes; most seeds zero them all
        n_seeds, all_zero = 40, 0
        for seed in range(n_seeds):
            r = np.random.default_rng(seed)
            path = lasso_cv(r.normal(size=(100, 5)), r.normal(size=100), seed=seed)
            b = path.best_index
            all_zero += bool(np.all(path.best_coefs == 0.0))
            # and the chosen error is within one standard error of the null model
            assert path.cv_mean_errors[0] - path.cv_mean_errors[b] <= path.cv_std_errors[b]
        assert all_zero / n_seeds >= 0.6

    def test_cv_support_recovery(self):
        n_seeds, kept = 20, 0
        for seed in range(n_seeds):
            r = np.random.default_rng(1000 + seed)
            X = r.normal(size=(200, 7))
            y = 3 * X[:, 0] - 2 * X[:, 1] + r.normal(size=200)
            coefs = lasso_cv(X, y, seed=seed).best_coefs
            kept += coefs[0] != 0 and coefs[1] != 0
        assert kept / n_seeds >= 0.9

    def test_exact_zeros_serialize(self):
        X, y = problem(16, n=60)
        path = lasso_path(X, y)
        assert path.n_zero(0) == X.shape[1]
        assert all(str(v) == "0.0" for v in path.coefs[0])


class TestSubset:
    def test_signal_feature_survives(self):
        r = np.random.default_rng(17)
        X = r.normal(size=(120, 5))
        y = 4 * X[:, 2] + 1
        res = backward_subset(X[:90], y[:90], X[90:], y[90:], list("abcde"))
        assert res.row(1)["features"] == ["c"]

    @pytest.mark.parametrize("k", [3, 7])
    def test_nested_rows(self, k):
        r = np.random.default_rng(k)
        X = r.normal(size=(100, k))
        y = X @ r.normal(size=k) + r.normal(size=100)
        labels = [f"f{i}" for i in range(k)]
        res = backward_subset(X[:70], y[:70], X[70:], y[70:], labels)
        assert [row["size"] for row in res.rows] == list(range(1, k + 1))
        for small, big in zip(res.rows, res.rows[1:]):
            assert set(small["features"]) < set(big["features"])
        assert len(res.eliminated) == k - 1

    def test_adj_r2_criterion_and_refit(self):
        r = np.random.default_rng(18)
        X = r.normal(size=(100, 4))
        y = 2 * X[:, 0] - X[:, 3] + r.normal(size=100)
        labels = list("abcd")
        res = backward_subset(X[:70], y[:70], X[70:], y[70:], labels, "adj_r2")
        assert set(res.best_features) >= {"a", "d"}
        cols, fit = refit_subset(res, X[:70], y[:70], labels)
        assert fit.labels == ["(Intercept)"] + res.best_features
        assert len(cols) == res.best_size

    def test_errors(self):
        X = np.ones((10, 1))
        with pytest.raises(ValueError):
            backward_subset(X, X[:, 0], X, X[:, 0])
        with pytest.raises(ValueError):
            backward_subset(np.ones((10, 2)), np.ones(10), np.ones((5, 2)), np.ones(5),
                            criterion="aic")


class TestRmse:
    def test_examples(self):
        assert rmse([1, 2, 3], [1, 2, 3]) == 0.0
        assert rmse(np.arange(5.0) + 2.5, np.arange(5.0)) == pytest.approx(2.5)
        assert rmse([1, 2], [2, 4]) == pytest.approx(math.sqrt(5 / 2))

    @given(st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), min_size=1,
                    max_size=30))
    def test_symmetric_nonnegative(self, pairs):
        a, b = np.array(pairs).T
        assert rmse(a, b) == rmse(b, a) >= 0

    def test_errors(self):
        with pytest.raises(SizeError):
            rmse([1, 2], [1])
        with pytest.raises(SizeError):
            rmse([], [])
