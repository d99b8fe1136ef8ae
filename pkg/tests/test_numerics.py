import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mmforecast.errors import DegenerateError, RankError, SizeError, SymmetryError
from mmforecast.numerics import (correlation_matrix, describe, iqr_outliers, least_squares_solve,
                                 standardize, symmetric_eigen)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


class TestDescribe:
    def test_one_to_five(self):
        s = describe([1, 2, 3, 4, 5])
        assert s.mean == 3 and s.q50 == 3
        assert s.std == pytest.approx(math.sqrt(2.5), abs=1e-12)
        assert (s.q25, s.q75, s.min, s.max, s.count) == (2, 4, 1, 5, 5)

    def test_constant(self):
        s = describe([7.5] * 3)
        assert s.std == 0 and s.q25 == s.q50 == s.q75 == 7.5

    def test_empty(self):
        with pytest.raises(SizeError):
            describe([])

    def test_quartiles_interpolate(self):
        # type-7: position 0.25*(n-1) = 0.75 between 10 and 20
        assert describe([10, 20, 30, 40]).q25 == pytest.approx(17.5)

    @given(st.lists(finite, min_size=1, max_size=40), st.randoms())
    def test_permutation_invariant(self, xs, rnd):
        ys = list(xs)
        rnd.shuffle(ys)
        a, b = describe(xs), describe(ys)
        for f in ("count", "min", "q25", "q50", "q75", "max"):
            assert getattr(a, f) == getattr(b, f)
        assert a.mean == pytest.approx(b.mean, abs=1e-9)
        assert a.std == pytest.approx(b.std, abs=1e-9)
        assert a.min <= a.q25 <= a.q50 <= a.q75 <= a.max


class TestCorrelation:
    def test_perfect(self):
        x = np.arange(10.0)
        R = correlation_matrix(np.column_stack([x, 2 * x, -x]), ["x", "2x", "-x"]).values
        assert R[0, 1] == pytest.approx(1.0, abs=1e-15)
        assert R[0, 2] == pytest.approx(-1.0, abs=1e-15)

    def test_against_pearson_formula(self):
        a = np.array([1.0, 3.0, 2.0, 5.0, 4.0])
        b = np.array([2.0, 1.0, 4.0, 3.0, 7.0])
        ma, mb = sum(a) / 5, sum(b) / 5
        cov = sum((x - ma) * (y - mb) for x, y in zip(a, b)) / 4
        sa = math.sqrt(sum((x - ma) ** 2 for x in a) / 4)
        sb = math.sqrt(sum((y - mb) ** 2 for y in b) / 4)
        R = correlation_matrix(np.column_stack([a, b])).values
        assert R[0, 1] == pytest.approx(cov / (sa * sb), abs=1e-12)

    def test_constant_column_named(self):
        with pytest.raises(DegenerateError, match="'CRR'") as exc:
            correlation_matrix(np.column_stack([np.arange(4.0), np.ones(4)]), ["Volume", "CRR"])
        assert exc.value.column == "CRR"

    def test_structure(self, rng):
        R = correlation_matrix(rng.normal(size=(30, 5))).values
        np.testing.assert_array_equal(np.diag(R), 1.0)
        np.testing.assert_array_equal(R, R.T)
        assert np.all(np.abs(R) <= 1)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), arrays(float, 4, elements=st.floats(0.1, 100)),
           arrays(float, 4, elements=st.floats(-100, 100)))
    def test_affine_invariance(self, seed, scale, shift):
        X = np.random.default_rng(seed).normal(size=(25, 4))
        R1 = correlation_matrix(X).values
        R2 = correlation_matrix(X * scale + shift).values
        np.testing.assert_allclose(R1, R2, atol=1e-10)


class TestStandardize:
    def test_two_points(self):
        Z, m, s = standardize([[0.0], [10.0]])
        np.testing.assert_allclose(Z[:, 0], [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)
        assert m[0] == 5 and s[0] == pytest.approx(math.sqrt(50))

    def test_idempotent_and_inverse(self, rng):
        X = rng.normal(3, 7, size=(40, 3))
        Z, m, s = standardize(X)
        np.testing.assert_allclose(Z.mean(0), 0, atol=1e-10)
        np.testing.assert_allclose(Z.std(0, ddof=1), 1, atol=1e-12)
        np.testing.assert_allclose(standardize(Z)[0], Z, atol=1e-10)
        np.testing.assert_allclose(Z * s + m, X, atol=1e-10)

    def test_constant_column(self):
        with pytest.raises(DegenerateError):
            standardize(np.ones((5, 1)))


class TestLeastSquares:
    def test_identity(self):
        y = np.array([3.0, -1.0, 2.5])
        np.testing.assert_allclose(least_squares_solve(np.eye(3), y), y)

    def test_exact_line(self):
        x = np.arange(6.0)
        np.testing.assert_allclose(least_squares_solve(np.column_stack([np.ones(6), x]), 3 + 2 * x),
                                   [3, 2], atol=1e-12)

    def test_against_normal_equations(self):
        X = np.array([[1, 0.5], [1, 1.7], [1, 2.1], [1, 3.8], [1, 4.4]])
        y = np.array([1.1, 2.9, 3.2, 6.8, 7.5])
        # 2x2 normal equations solved by Cramer's rule
        a, b, d = X[:, 0] @ X[:, 0], X[:, 0] @ X[:, 1], X[:, 1] @ X[:, 1]
        u, v = X[:, 0] @ y, X[:, 1] @ y
        det = a * d - b * b
        expected = [(d * u - b * v) / det, (a * v - b * u) / det]
        np.testing.assert_allclose(least_squares_solve(X, y), expected, atol=1e-10)

    def test_rank_deficient(self):
        x = np.arange(5.0)
        with pytest.raises(RankError):
            least_squares_solve(np.column_stack([x, 2 * x]), x)

    def test_underdetermined(self):
        with pytest.raises(SizeError):
            least_squares_solve(np.ones((1, 2)), [1.0])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.integers(2, 6))
    def test_residual_orthogonal(self, seed, k):
        r = np.random.default_rng(seed)
        X = r.normal(size=(30, k))
        y = r.normal(scale=100, size=30)
        resid = y - X @ least_squares_solve(X, y)
        assert np.max(np.abs(X.T @ resid)) < 1e-8 * np.linalg.norm(y)


class TestSymmetricEigen:
    def test_diagonal(self):
        res = symmetric_eigen(np.diag([2.0, 5.0]))
        np.testing.assert_allclose(res.eigenvalues, [5, 2])
        np.testing.assert_allclose(np.abs(res.eigenvectors), [[0, 1], [1, 0]])

    def test_two_by_two(self):
        # characteristic polynomial (2-l)^2 - 1 = 0 -> l = 3, 1
        res = symmetric_eigen(np.array([[2.0, 1.0], [1.0, 2.0]]))
        np.testing.assert_allclose(res.eigenvalues, [3, 1], atol=1e-14)

    def test_residuals_random(self, rng):
        A = rng.normal(size=(6, 6))
        S = (A + A.T) / 2
        res = symmetric_eigen(S)
        for lam, v in zip(res.eigenvalues, res.eigenvectors.T):
            assert np.max(np.abs(S @ v - lam * v)) < 1e-9
        assert np.all(np.diff(res.eigenvalues) <= 0)

    def test_not_symmetric(self):
        with pytest.raises(SymmetryError):
            symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 10))
    def test_trace_and_orthonormality(self, seed, n):
        A = np.random.default_rng(seed).normal(size=(n, n))
        S = A + A.T
        res = symmetric_eigen(S)
        assert res.eigenvalues.sum() == pytest.approx(np.trace(S), abs=1e-9)
        np.testing.assert_allclose(res.eigenvectors.T @ res.eigenvectors, np.eye(n), atol=1e-9)


class TestOutliers:
    def test_single_high(self):
        # q25 = 2, q75 = 4, upper fence 7
        assert iqr_outliers([1, 2, 3, 4, 100]) == [4]

    def test_constant(self):
        assert iqr_outliers([3.0] * 8) == []

    def test_uniform(self):
        # q25 = 5.75, q75 = 15.25 -> fences -8.5 and 29.5
        assert iqr_outliers(range(1, 21)) == []
