"""Time-series analysis: differencing, ACF/PACF, ADF, decomposition, ARIMA, Holt-Winters."""
from .adf import AdfResult, adf_pvalue, adf_test, critical_values
from .arima import (ArimaModel, auto_arima, choose_d, fit_arima, information_criteria,
                    is_invertible, is_stationary)
from .core import TimeSeries, acf, difference, monthly_returns, pacf, undifference
from .decompose import DecompositionResult, decompose
from .forecast import Forecast, forecast
from .holtwinters import HoltWintersModel, fit_holt_winters, holt_winters_sse

__all__ = [
    "AdfResult", "ArimaModel", "DecompositionResult", "Forecast", "HoltWintersModel",
    "TimeSeries", "acf", "adf_pvalue", "adf_test", "auto_arima", "choose_d",
    "critical_values", "decompose", "difference", "fit_arima", "fit_holt_winters",
    "forecast", "holt_winters_sse", "information_criteria", "is_invertible", "is_stationary", "monthly_returns",
    "pacf", "undifference",
]
