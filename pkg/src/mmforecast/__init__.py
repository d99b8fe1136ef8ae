"""Forecasting and regression toolkit for money-market instrument volumes."""
from ._accel import backend

__version__ = "0.1.0"

__all__ = ["backend", "__version__"]
