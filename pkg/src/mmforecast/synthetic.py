"""Deterministic synthetic inputs in the three source CSV layouts.

The bundled dataset under ``mmforecast/data/synthetic`` was produced by
``write_dataset(dir, seed=7)``. Volume is a linear function of the stock index,
policy rate and MinROI plus a monthly seasonal pattern and Gaussian noise.
"""
import bisect
import calendar
import csv
import json
from datetime import date, timedelta
from pathlib import Path

import numpy as np

SEASONAL = np.array([-5500.0, -2400.0, 4100.0, -7300.0, -2300.0, 5900.0,
                     -2900.0, 6300.0, 4400.0, -1800.0, -400.0, 1900.0])
SEASONAL = SEASONAL - SEASONAL.mean()

DEFAULT_WEIGHTS = {"open": 6000.0, "prr": -3500.0, "min_roi": 2500.0}


def _fortnights(start_year, years):
    out = []
    for y in range(start_year, start_year + years):
        for m in range(1, 13):
            out.append(date(y, m, 15))
            out.append(date(y, m, calendar.monthrange(y, m)[1]))
    return out


def _fmt_rbi(d):
    return f"{calendar.month_abbr[d.month]}. {d.day}, {d.year}"


def generate(seed=7, start_year=2011, years=9, weights=None, noise=4000.0, seasonal=True):
    """Return (money_market, stock_monthly, bank_rates) as lists of row tuples."""
    rng = np.random.default_rng(seed)
    weights = DEFAULT_WEIGHTS if weights is None else weights
    months = [date(y, m, 1) for y in range(start_year, start_year + years) for m in range(1, 13)]

    # stock index: drifting geometric walk
    log_close = np.log(18000.0) + np.cumsum(rng.normal(0.007, 0.045, len(months)))
    close = np.exp(log_close)
    opens = np.r_[close[0] * np.exp(rng.normal(0, 0.01)), close[:-1]]
    spread = np.abs(rng.normal(0.0, 0.02, len(months))) + 0.005
    high = np.maximum(opens, close) * (1 + spread)
    low = np.minimum(opens, close) * (1 - spread)
    stock = [(m.isoformat(), round(o, 2), round(h, 2), round(lo, 2), round(c, 2))
             for m, o, h, lo, c in zip(months, opens, high, low, close)]

    # weekly policy rates, stepping by 25bp
    first = date(start_year, 1, 7)
    weeks = [first + timedelta(days=7 * k) for k in range(years * 53)]
    prr, crr = 6.5, 5.0
    rates = []
    weekly_prr = []
    for wk in weeks:
        if rng.random() < 0.06:
            prr = float(np.clip(prr + rng.choice([-0.25, 0.25]), 5.25, 8.5))
        if rng.random() < 0.03:
            crr = float(np.clip(crr + rng.choice([-0.25, 0.25]), 4.0, 6.0))
        spread = 1.0 if wk.year < 2017 else 0.5 if wk.year < 2019 else 0.25
        rates.append((_fmt_rbi(wk), prr, round(prr - spread, 2), crr))
        weekly_prr.append(prr)
    # a few repeated rows, as raw RBI extracts contain
    rates = rates[:20] + rates[15:20] + rates[20:]

    fortnights = _fortnights(start_year, years)
    by_month = {(m.year, m.month): i for i, m in enumerate(months)}
    o_series = np.array([opens[by_month[(d.year, d.month)]] for d in fortnights])
    prr_series = np.array([weekly_prr[bisect.bisect_right(weeks, d) - 1] for d in fortnights])
    min_roi = prr_series - 0.4 + rng.normal(0, 0.35, len(fortnights))
    max_roi = min_roi + np.abs(rng.normal(1.5, 0.6, len(fortnights)))

    def z(v):
        return (v - v.mean()) / v.std()

    volume = 25000.0 + rng.normal(0, noise, len(fortnights))
    for name, series in (("open", o_series), ("prr", prr_series), ("min_roi", min_roi)):
        volume += weights.get(name, 0.0) * z(series)
    if seasonal:
        volume += np.array([SEASONAL[d.month - 1] for d in fortnights])
    volume = np.maximum(volume, 500.0)
    outstanding = volume * rng.uniform(4.0, 6.0, len(fortnights))
    mm = [(d.isoformat(), round(t, 2), round(v, 2), round(a, 4), round(b, 4))
          for d, t, v, a, b in zip(fortnights, outstanding, volume, min_roi, max_roi)]
    # newest first, like the RBI download
    return mm[::-1], stock, rates[::-1]


def write_dataset(out_dir, seed=7, **kwargs):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mm, stock, rates = generate(seed, **kwargs)
    files = {
        "money_market": (out / "money_market.csv",
                         ["FortnightEnded", "TotalAmountOutstanding", "Volume", "MinROI", "MaxROI"], mm),
        "stock_monthly": (out / "stock_monthly.csv", ["Month", "Open", "High", "Low", "Close"], stock),
        "bank_rates": (out / "bank_rates.csv", ["FortnightEnded", "PRR", "RRR", "CRR"], rates),
    }
    for path, header, rows in files.values():
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    return {k: v[0] for k, v in files.items()}


def write_config(path, inputs, output_dir="out", **overrides):
    cfg = {"money_market": str(inputs["money_market"]), "stock_monthly": str(inputs["stock_monthly"]),
           "bank_rates": str(inputs["bank_rates"]), "output_dir": str(output_dir)}
    cfg.update(overrides)
    Path(path).write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")
    return path


def bundled_dir():
    return Path(__file__).parent / "data" / "synthetic"
