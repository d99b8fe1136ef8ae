"""End-to-end run: ingest, merge, analyse, forecast, model and compare."""
import csv
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from datetime import date
from pathlib import Path

import numpy as np

from . import dataio, numerics
from .errors import ConfigError, DataError, NumericalError
from .pca import fit_pca
from .plots import render_plots
from .regression import (GdConfig, add_intercept, backward_subset, default_lambdas,
                         gradient_descent_fit, lasso_cv, ols_fit, refit_subset, rmse)
from .report import PipelineReport
from .timeseries import (TimeSeries, adf_test, auto_arima, decompose, fit_holt_winters,
                         forecast, monthly_returns, pacf)

log = logging.getLogger(__name__)

LABELS = {"min_roi": "MinROI", "max_roi": "MaxROI", "open": "Open", "close": "Close",
          "prr": "PRR", "rrr": "RRR", "crr": "CRR", "volume": "Volume"}
PREDICTOR_LABELS = [LABELS[c] for c in dataio.PREDICTORS]
MODEL_ROWS = [("ols", "Linear Regression (OLS)"), ("gradient_descent", "Linear Regression (Gradient Descent)"),
              ("lasso", "Lasso Regression"), ("subset", "Sub-setting")]


@dataclass
class PipelineConfig:
    money_market: str
    stock_monthly: str
    bank_rates: str
    instrument: str = "money_market_instrument"
    output_dir: str = "out"
    seed: int = 0
    ts_aggregate: str = "monthly_mean"
    decomposition_mode: str = "additive"
    adf_lag: object = "auto"
    pacf_max_lag: int = 20
    arima_p_max: int = 5
    arima_q_max: int = 5
    arima_d_max: int = 2
    hw_seasonal_mode: str = "additive"
    horizon: int = 12
    pca_standardized: bool = False
    split_fraction: float = 0.8
    split_mode: str = "chronological"
    gd: dict = field(default_factory=lambda: asdict(GdConfig()))
    lambda_grid: dict = field(default_factory=lambda: {"count": 100, "high": 1e10, "low": 0.002})
    cv_folds: int = 5
    subset_criterion: str = "validation_rmse"

    def __post_init__(self):
        checks = [
            (self.horizon >= 1, "horizon must be >= 1"),
            (0 < self.split_fraction < 1, "split_fraction must lie in (0, 1)"),
            (self.cv_folds >= 2, "cv_folds must be >= 2"),
            (self.split_mode in ("chronological", "shuffled"), "split_mode must be chronological or shuffled"),
            (self.ts_aggregate in ("monthly_mean", "none"), "ts_aggregate must be monthly_mean or none"),
            (self.decomposition_mode in ("additive", "multiplicative"), "bad decomposition_mode"),
            (self.hw_seasonal_mode in ("additive", "multiplicative"), "bad hw_seasonal_mode"),
            (self.subset_criterion in ("validation_rmse", "adj_r2"), "bad subset_criterion"),
            (self.adf_lag == "auto" or (isinstance(self.adf_lag, int) and self.adf_lag >= 0),
             "adf_lag must be 'auto' or a non-negative integer"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)
        try:
            self.gd_config = GdConfig(**self.gd)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"gd: {exc}") from None
        unknown = set(self.lambda_grid) - {"count", "high", "low"}
        if unknown:
            raise ConfigError(f"lambda_grid: unknown keys {sorted(unknown)}")

    @property
    def lambdas(self):
        g = {"count": 100, "high": 1e10, "low": 0.002, **self.lambda_grid}
        return default_lambdas(int(g["count"]), float(g["high"]), float(g["low"]))

    @classmethod
    def from_dict(cls, data, base_dir=None):
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"money_market", "stock_monthly", "bank_rates"} - set(data)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        data = dict(data)
        if base_dir is not None:
            for key in ("money_market", "stock_monthly", "bank_rates", "output_dir"):
                if key in data and not Path(data[key]).is_absolute():
                    data[key] = str(Path(base_dir) / data[key])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, path):
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"{path}: no such config file") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(data, base_dir=path.parent)


class PipelineError(Exception):
    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)


# ------------------------------------------------------------------ helpers


def load_rows(config, stats=None):
    return dataio.load_merged(config.money_market, config.stock_monthly, config.bank_rates, stats)


def volume_series(rows, aggregate="monthly_mean", name="volume"):
    """Volume as a time series: monthly means (period 12) or raw fortnights (period 24)."""
    if aggregate == "none":
        return TimeSeries([r.fortnight_ended for r in rows], [r.volume for r in rows], 24, name)
    buckets = {}
    for r in rows:
        buckets.setdefault((r.year, r.month), []).append(r.volume)
    keys = sorted(buckets)
    return TimeSeries([date(y, m, 1) for y, m in keys], [float(np.mean(buckets[k])) for k in keys],
                      12, name)


def regression_data(rows, config):
    train, val = dataio.split_train_validation(rows, config.split_fraction, config.split_mode,
                                               config.seed)
    return (dataio.to_matrix(train, dataio.PREDICTORS), np.array([r.volume for r in train]),
            dataio.to_matrix(val, dataio.PREDICTORS), np.array([r.volume for r in val]),
            train, val)


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _g(x):
    return f"{x:.10g}"


# ------------------------------------------------------------------- stages


class _Runner:
    def __init__(self, config, out_dir):
        self.config = config
        self.out = Path(out_dir)
        self.report = PipelineReport()
        self.ctx = {}

    def stage(self, name, fn, needs=()):
        for dep in needs:
            if dep not in self.ctx:
                self.report.skip(name, f"requires {dep!r}, which is unavailable")
                return
        try:
            result = fn()
        except (NumericalError, ValueError, np.linalg.LinAlgError) as exc:
            log.warning("stage %s skipped: %s", name, exc)
            self.report.skip(name, f"{type(exc).__name__}: {exc}")
            return
        self.ctx[name] = result


def run_pipeline(config, out_dir=None, plots=True):
    """Run every stage in order and write the report plus side files.

    Ingest/merge failures abort with :class:`PipelineError`; a numerical
    failure in any later stage marks it (and anything depending on it) as
    skipped with the reason.
    """
    out = Path(out_dir or config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    run = _Runner(config, out)
    rep = run.report
    rep.meta = {"instrument": config.instrument, "seed": config.seed,
                "config": {k: v for k, v in asdict(config).items()
                           if k not in ("money_market", "stock_monthly", "bank_rates", "output_dir")}}

    stats = {}
    try:
        rows = load_rows(config, stats)
    except DataError as exc:
        raise PipelineError("ingest", exc) from exc
    if len(rows) < 10:
        raise PipelineError("merge", DataError(f"only {len(rows)} merged rows"))
    dataio.write_merged(rows, out / "merged.csv")
    rep.meta.update({
        "n_rows": len(rows), "dropped_rows": stats.get("dropped", 0),
        "first_date": rows[0].fortnight_ended, "last_date": rows[-1].fortnight_ended,
        "zero_volume_dates": [r.fortnight_ended for r in rows if r.volume == 0],
    })

    columns = ["volume"] + dataio.PREDICTORS
    table = dataio.to_matrix(rows, columns)
    labels = [LABELS[c] for c in columns]

    def describe():
        out_ = {}
        for j, lab in enumerate(labels):
            s = numerics.describe(table[:, j]).as_dict()
            s["outliers"] = numerics.iqr_outliers(table[:, j])
            out_[lab] = s
        return out_
    run.stage("describe", describe)
    if "describe" in run.ctx:
        rep.add("describe", run.ctx["describe"])

    def correlation():
        cm = numerics.correlation_matrix(table, labels)
        cm.to_csv(out / "corr_matrix.csv")
        return cm
    run.stage("correlation", correlation)
    if "correlation" in run.ctx:
        rep.add("correlation", {"labels": labels, "values": run.ctx["correlation"].values})

    # ---- time series on the volume series
    series = volume_series(rows, config.ts_aggregate, config.instrument)
    run.ctx["series"] = series
    rep.add("series", {"period": series.period, "dates": series.times, "values": series.values})

    def returns():
        r = monthly_returns(series)
        counts, edges = np.histogram(r.values, bins=20)
        return {"values": r.values, "histogram_counts": counts, "histogram_edges": edges}
    run.stage("returns", returns)

    def decomposition():
        d = decompose(series, config.decomposition_mode)
        d.to_csv(out / "decomposition.csv")
        return {"mode": d.mode, "seasonal_indices": d.seasonal,
                "seasonal_labels": d.seasonal_labels(),
                "seasonal_sum": float(np.sum(d.seasonal)), "observed": d.observed,
                "trend": d.trend, "seasonal_series": d.seasonal_series, "remainder": d.remainder}
    run.stage("decomposition", decomposition)

    run.stage("adf", lambda: adf_test(series, config.adf_lag).as_dict())

    def pacf_stage():
        lag = min(config.pacf_max_lag, len(series) - 1)
        return {"values": pacf(series, lag), "band": 2.0 / np.sqrt(len(series)), "n": len(series)}
    run.stage("pacf", pacf_stage)

    def arima():
        m = auto_arima(series, config.arima_p_max, config.arima_q_max, config.arima_d_max)
        return m
    run.stage("arima", arima)
    run.stage("holt_winters", lambda: fit_holt_winters(series, config.hw_seasonal_mode))

    for name in ("returns", "decomposition", "adf", "pacf"):
        if name in run.ctx:
            rep.add(name, run.ctx[name])
    if "arima" in run.ctx:
        m = run.ctx["arima"]
        rep.add("arima", {**m.summary(), "label": m.label, "candidates": m.candidates})
    if "holt_winters" in run.ctx:
        rep.add("holt_winters", run.ctx["holt_winters"].summary())

    fc = {}
    for key, fname in (("arima", "forecast_arima.csv"), ("holt_winters", "forecast_hw.csv")):
        if key in run.ctx:
            f = forecast(run.ctx[key], config.horizon)
            f.to_csv(out / fname)
            fc[key] = f
    if fc:
        first = next(iter(fc.values()))
        rep.add("forecast", {"horizon": config.horizon, "origin": first.origin, "dates": first.dates,
                             **{k: f.point_values for k, f in fc.items()}})
        run.ctx["forecast"] = fc
    else:
        rep.skip("forecast", "no fitted time-series model")

    # ---- PCA and regression on the merged table
    X_all = dataio.to_matrix(rows, dataio.PREDICTORS)

    def pca_stage():
        p = fit_pca(X_all, config.pca_standardized, PREDICTOR_LABELS)
        p.to_csv(out / "pca.csv")
        return {"standardized": p.standardized, "table": p.table(), "loadings": p.loadings,
                "total_variance": float(p.eigenvalues.sum())}
    run.stage("pca", pca_stage)
    if "pca" in run.ctx:
        rep.add("pca", run.ctx["pca"])

    Xtr, ytr, Xva, yva, _, val_rows = regression_data(rows, config)
    rep.add("split", {"mode": config.split_mode, "fraction": config.split_fraction,
                      "n_train": len(ytr), "n_validation": len(yva)})
    preds = {}

    def ols_stage():
        fit = ols_fit(add_intercept(Xtr), ytr, ["(Intercept)"] + PREDICTOR_LABELS)
        fit.to_csv(out / "ols.csv")
        preds["ols"] = fit.predict(add_intercept(Xva))
        return {"table": fit.table(), "r2": fit.r2, "adj_r2": fit.adj_r2,
                "residual_std": fit.residual_std}
    run.stage("ols", ols_stage)

    def gd_stage():
        res = gradient_descent_fit(Xtr, ytr, config.gd_config)
        preds["gradient_descent"] = res.predict(Xva)
        names = ["(Intercept)"] + PREDICTOR_LABELS
        return {"config": asdict(config.gd_config), "iterations": res.iterations,
                "converged": res.converged, "final_cost": float(res.cost_trace[-1]),
                "scaled_coefficients": dict(zip(names, res.theta)),
                "raw_coefficients": dict(zip(names, res.raw_coefficients()))}
    run.stage("gradient_descent", gd_stage)

    def lasso_stage():
        path = lasso_cv(Xtr, ytr, config.lambdas, config.cv_folds, config.seed, PREDICTOR_LABELS)
        i = path.best_index
        preds["lasso"] = path.predict(Xva, i)
        _write_rows(out / "lasso_path.csv", ["lambda", "cv_mean_rmse", "cv_se"] + PREDICTOR_LABELS,
                    [[_g(lam), _g(m), _g(s)] + [_g(c) for c in row] for lam, m, s, row in
                     zip(path.lambdas, path.cv_mean_errors, path.cv_std_errors, path.coefs)])
        names = ["(Intercept)"] + PREDICTOR_LABELS
        return {"lambdas": path.lambdas, "labels": PREDICTOR_LABELS, "coef_path": path.coefs,
                "cv_mean_errors": path.cv_mean_errors, "cv_std_errors": path.cv_std_errors,
                "folds": path.folds, "best_lambda": path.best_lambda,
                "n_shrunk": path.n_zero(i),
                "scaled_coefficients": dict(zip(names, np.r_[path.intercept, path.coefs[i]])),
                "raw_coefficients": dict(zip(names, path.raw_coefficients(i)))}
    run.stage("lasso", lasso_stage)

    def subset_stage():
        res = backward_subset(Xtr, ytr, Xva, yva, PREDICTOR_LABELS, config.subset_criterion)
        cols, fit = refit_subset(res, Xtr, ytr, PREDICTOR_LABELS)
        preds["subset"] = fit.predict(add_intercept(Xva[:, cols]))
        _write_rows(out / "subset.csv", ["size", "features", "validation_rmse", "adj_r2"],
                    [[r["size"], " + ".join(r["features"]), _g(r["validation_rmse"]), _g(r["adj_r2"])]
                     for r in res.rows])
        return {"criterion": res.criterion, "rows": res.rows, "best_size": res.best_size,
                "best_features": res.best_features, "eliminated": res.eliminated,
                "coefficients": {r["variable"]: r["coefficient"] for r in fit.table()}}
    run.stage("subset", subset_stage)

    for name in ("ols", "gradient_descent", "lasso", "subset"):
        if name in run.ctx:
            rep.add(name, run.ctx[name])

    table_rows = [{"model": label, "key": key, "rmse": rmse(preds[key], yva)}
                  for key, label in MODEL_ROWS if key in preds]
    if table_rows:
        rep.add("rmse", table_rows)
        _write_rows(out / "rmse.csv", ["model", "rmse"], [[r["model"], _g(r["rmse"])] for r in table_rows])
        best = min(table_rows, key=lambda r: r["rmse"])
        rep.add("predictions", {"model": best["model"],
                                "dates": [r.fortnight_ended for r in val_rows],
                                "actual": yva, "predicted": preds[best["key"]]})
        run.ctx["predictions"] = True
    else:
        rep.skip("rmse", "no regression model fitted")

    if plots:
        plot_skips = {}
        render_plots(rep, out / "plots", plot_skips)
        rep.meta["skipped_plots"] = plot_skips
    rep.write(out / "report.json")
    return rep
