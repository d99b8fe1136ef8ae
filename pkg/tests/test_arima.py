import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import norm

from conftest import simulate_arma
from mmforecast.errors import ConvergenceError, SizeError
from mmforecast.timeseries import (ArimaModel, TimeSeries, auto_arima, fit_arima, forecast,
                                   information_criteria, is_invertible, is_stationary)
from mmforecast.timeseries.arima import choose_d


def ts(values):
    return TimeSeries.from_values(values)


def test_white_noise_loglik_closed_form():
    x = np.random.default_rng(3).normal(2.0, 1.5, size=300)
    m = fit_arima(ts(x), (0, 0, 0))
    # no free coefficients: residuals are the raw values and sigma is their RMS
    sigma = math.sqrt(np.mean(x ** 2))
    assert m.log_likelihood == pytest.approx(norm.logpdf(x, 0.0, sigma).sum(), abs=1e-6)


def test_white_noise_with_mean_loglik():
    x = np.random.default_rng(4).normal(2.0, 1.5, size=300)
    m = fit_arima(ts(x), (0, 0, 0), drift=True)
    assert m.drift_coef == pytest.approx(x.mean(), abs=1e-6)
    sigma = x.std()
    assert m.log_likelihood == pytest.approx(norm.logpdf(x, x.mean(), sigma).sum(), abs=1e-6)


def test_ar1_recovery():
    x = simulate_arma(np.random.default_rng(21), 500, ar=[0.7])
    m = fit_arima(ts(x), (1, 0, 0))
    assert m.ar_coeffs[0] == pytest.approx(0.7, abs=0.1)
    assert m.n_eff == 499


def test_ma1_sign_convention():
    x = simulate_arma(np.random.default_rng(22), 2000, ma=[0.5])
    m = fit_arima(ts(x), (0, 0, 1))
    assert m.ma_coeffs[0] == pytest.approx(0.5, abs=0.1)


def test_ramp_drift():
    y = 3.0 + 2.5 * np.arange(40)
    m = fit_arima(ts(y), (0, 1, 0), drift=True)
    assert m.drift_coef == pytest.approx(2.5, abs=1e-6)
    assert m.sigma2 == pytest.approx(0.0, abs=1e-10)
    assert np.isfinite(m.aic)


def test_size_error():
    with pytest.raises(SizeError):
        fit_arima(ts(np.arange(8.0)), (1, 1, 2))


def test_convergence_error_carries_best(monkeypatch):
    from mmforecast.timeseries import arima
    monkeypatch.setattr(arima, "MAX_ITER", 3)
    x = simulate_arma(np.random.default_rng(23), 200, ar=[0.5], ma=[0.3])
    with pytest.raises(ConvergenceError) as info:
        fit_arima(ts(x), (1, 0, 1))
    assert isinstance(info.value.best, ArimaModel)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2), st.integers(0, 2), st.booleans())
def test_information_criteria_identities(seed, p, q, drift):
    x = np.random.default_rng(seed).normal(size=80).cumsum()
    try:
        m = fit_arima(ts(x), (p, 1, q), drift=drift)
    except ConvergenceError as exc:
        m = exc.best
    k = p + q + int(drift) + 1
    assert m.n_params == k
    assert m.n_eff == 79 - p
    assert m.aic == 2 * k - 2 * m.log_likelihood
    assert m.bic == k * math.log(m.n_eff) - 2 * m.log_likelihood
    assert (m.aic, m.bic) == information_criteria(m.log_likelihood, k, m.n_eff)


def test_auto_arima_white_noise():
    x = np.random.default_rng(8).normal(size=300)
    m = auto_arima(ts(x), p_max=2, q_max=2)
    assert m.order[1] == 0
    assert m.order[0] + m.order[2] == 0
    assert len(m.candidates) == 9


def test_auto_arima_matches_direct_fit():
    w = simulate_arma(np.random.default_rng(9), 200, ar=[0.5], mu=0.2)
    y = np.r_[0.0, np.cumsum(w)]
    m = auto_arima(ts(y), p_max=2, q_max=1)
    direct = fit_arima(ts(y), m.order, drift=True)
    assert m.aic == pytest.approx(direct.aic, abs=1e-9)


def test_choose_d():
    rng = np.random.default_rng(10)
    assert choose_d(rng.normal(size=300)) == 0
    assert choose_d(rng.normal(size=300).cumsum()) == 1
    assert choose_d(rng.normal(size=300).cumsum().cumsum()) == 2


def test_stationarity_helpers():
    assert is_stationary([0.5]) and not is_stationary([1.0]) and not is_stationary([1.2])
    assert is_stationary([0.5, 0.3]) and not is_stationary([0.5, 0.6])
    assert is_invertible([-0.9]) and not is_invertible([1.0])
    assert is_invertible([]) and is_stationary([])


def test_forecast_ar1_by_hand():
    m = ArimaModel(order=(1, 0, 0), ar_coeffs=[0.5], series=np.array([1.0, 3.0, 8.0]),
                   residuals=np.zeros(2))
    np.testing.assert_allclose(forecast(m, 2).point_values, [4.0, 2.0])


def test_forecast_random_walk_drift():
    y = np.array([10.0, 9.0, 13.0, 12.5])
    m = ArimaModel(order=(0, 1, 0), drift=True, drift_coef=1.5, series=y, residuals=np.zeros(3))
    np.testing.assert_allclose(forecast(m, 3).point_values, [14.0, 15.5, 17.0])


def test_forecast_ma_uses_last_residual():
    m = ArimaModel(order=(0, 0, 1), ma_coeffs=[0.4], series=np.array([1.0, 2.0]),
                   residuals=np.array([0.5, 2.0]))
    np.testing.assert_allclose(forecast(m, 3).point_values, [0.8, 0.0, 0.0])


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 30))
def test_forecast_length(h):
    x = np.random.default_rng(h).normal(size=60).cumsum()
    m = fit_arima(TimeSeries.from_values(x), (1, 1, 1), drift=True)
    fc = forecast(m, h)
    assert len(fc.point_values) == h and len(fc.dates) == h


def test_forecast_invalid_horizon():
    m = ArimaModel(order=(0, 0, 0), series=np.ones(5), residuals=np.zeros(5))
    for h in (0, -1, 1.5):
        with pytest.raises(ValueError):
            forecast(m, h)
