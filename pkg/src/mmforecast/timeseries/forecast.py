import csv
from dataclasses import dataclass, field
from datetime import timedelta

import numpy as np

from .arima import ArimaModel, forecast_arima
from .core import add_months
from .holtwinters import HoltWintersModel, forecast_holt_winters


@dataclass
class Forecast:
    horizon: int
    point_values: np.ndarray
    origin: object = None
    dates: list = field(default_factory=list)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date", "point"])
            for i, v in enumerate(self.point_values):
                label = self.dates[i].isoformat() if self.dates else str(i + 1)
                w.writerow([label, f"{v:.10g}"])


def future_dates(times, h):
    """Extend ``times`` by h steps: monthly when spacing is about a month, else the median gap."""
    if len(times) < 2:
        return []
    gaps = np.diff([t.toordinal() for t in times])
    step = int(np.median(gaps))
    last = times[-1]
    if 28 <= step <= 31:
        return [add_months(last.replace(day=1), k) for k in range(1, h + 1)]
    return [last + timedelta(days=step * k) for k in range(1, h + 1)]


def forecast(model, h):
    if int(h) != h or h < 1:
        raise ValueError(f"horizon must be a positive integer, got {h}")
    h = int(h)
    if isinstance(model, ArimaModel):
        values = forecast_arima(model, h)
    elif isinstance(model, HoltWintersModel):
        values = forecast_holt_winters(model, h)
    else:
        raise TypeError(f"cannot forecast from {type(model).__name__}")
    times = model.times
    return Forecast(h, np.asarray(values, dtype=float), times[-1] if times else None,
                    future_dates(times, h))
