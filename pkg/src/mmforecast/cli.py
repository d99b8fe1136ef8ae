"""Command-line entry point: ``mmforecast <subcommand> --config cfg.json``."""
import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import dataio, numerics
from .errors import ConfigError, MMForecastError
from .pca import fit_pca
from .pipeline import (LABELS, MODEL_ROWS, PREDICTOR_LABELS, PipelineConfig, PipelineError,
                       load_rows, regression_data, run_pipeline, volume_series)
from .regression import (add_intercept, backward_subset, gradient_descent_fit, lasso_cv, ols_fit,
                         refit_subset, rmse)
from .report import normalize
from .timeseries import (TimeSeries, adf_test, auto_arima, decompose, fit_arima,
                         fit_holt_winters, forecast)

log = logging.getLogger("mmforecast")


def _emit(payload):
    sys.stdout.write(json.dumps(normalize(payload), sort_keys=True, indent=2) + "\n")


def _config(args):
    if not getattr(args, "config", None):
        raise ConfigError("--config is required for this command")
    cfg = PipelineConfig.from_json(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _out_dir(args):
    out = getattr(args, "out", None)
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        return Path(out)
    return None


def _read_series(path, period):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header[:2] != ["date", "value"]:
            raise dataio.SchemaError(f"{path}: expected header 'date,value', got {header}")
        times, values = [], []
        for row in reader:
            if not row:
                continue
            try:
                times.append(dataio.parse_date(row[0]))
                values.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise dataio.RowError(str(exc), reader.line_num) from None
    return TimeSeries(times, values, period)


def _series(args):
    if getattr(args, "series", None):
        return _read_series(args.series, args.period)
    cfg = _config(args)
    return volume_series(load_rows(cfg), cfg.ts_aggregate, cfg.instrument)


# ---------------------------------------------------------------- commands


def cmd_pipeline(args):
    cfg = _config(args)
    try:
        report = run_pipeline(cfg, out_dir=args.out)
    except PipelineError as exc:
        raise exc.cause from exc
    out = Path(args.out or cfg.output_dir)
    print(f"report written to {out / 'report.json'}")
    for row in report.stages.get("rmse", []):
        print(f"  {row['model']:<40s} RMSE {row['rmse']:.2f}")
    for stage, reason in sorted(report.skipped.items()):
        print(f"  skipped {stage}: {reason}")


def cmd_ingest(args):
    records = dataio.dedupe_sort(dataio.ingest_table(args.path, args.schema)) if args.clean else \
        dataio.ingest_table(args.path, args.schema)
    out = _out_dir(args)
    if out:
        dataio.write_table(records, out / f"{args.schema}.csv", args.schema)
    _emit({"schema": args.schema, "records": len(records),
           "first": records[0].key if records else None, "last": records[-1].key if records else None})


def cmd_describe(args):
    rows = load_rows(_config(args))
    cols = ["volume"] + dataio.PREDICTORS
    X = dataio.to_matrix(rows, cols)
    _emit({LABELS[c]: numerics.describe(X[:, j]).as_dict() for j, c in enumerate(cols)})


def cmd_corr(args):
    rows = load_rows(_config(args))
    cols = ["volume"] + dataio.PREDICTORS
    cm = numerics.correlation_matrix(dataio.to_matrix(rows, cols), [LABELS[c] for c in cols])
    out = _out_dir(args)
    if out:
        cm.to_csv(out / "corr_matrix.csv")
    _emit({"labels": cm.labels, "values": cm.values})


def cmd_adf(args):
    lag = "auto" if args.lag == "auto" else int(args.lag)
    _emit(adf_test(_series(args), lag).as_dict())


def cmd_decompose(args):
    d = decompose(_series(args), args.mode)
    out = _out_dir(args)
    if out:
        d.to_csv(out / "decomposition.csv")
    _emit({"mode": d.mode, "seasonal": dict(zip(d.seasonal_labels(), d.seasonal)),
           "seasonal_sum": float(np.sum(d.seasonal))})


def _parse_order(text):
    try:
        p, d, q = (int(k) for k in text.split(","))
    except ValueError:
        raise ConfigError(f"--order must look like p,d,q, got {text!r}") from None
    return p, d, q


def _arima(args, s):
    if args.order:
        return fit_arima(s, _parse_order(args.order), drift=args.drift)
    return auto_arima(s, args.p_max, args.q_max, args.d_max)


def cmd_arima(args):
    m = _arima(args, _series(args))
    _emit({"label": m.label, **m.summary()})


def cmd_hw(args):
    _emit(fit_holt_winters(_series(args), args.mode).summary())


def cmd_forecast(args):
    if args.horizon < 1:
        raise ConfigError(f"--horizon must be >= 1, got {args.horizon}")
    s = _series(args)
    model = _arima(args, s) if args.model == "arima" else fit_holt_winters(s, args.mode)
    f = forecast(model, args.horizon)
    out = _out_dir(args)
    if out:
        f.to_csv(out / f"forecast_{'arima' if args.model == 'arima' else 'hw'}.csv")
    _emit({"model": args.model, "origin": f.origin, "dates": f.dates, "points": f.point_values})


def cmd_pca(args):
    rows = load_rows(_config(args))
    p = fit_pca(dataio.to_matrix(rows, dataio.PREDICTORS), args.standardized, PREDICTOR_LABELS)
    out = _out_dir(args)
    if out:
        p.to_csv(out / "pca.csv")
    _emit({"standardized": p.standardized, "table": p.table()})


def _fit(model, cfg, Xtr, ytr, Xva, yva):
    names = ["(Intercept)"] + PREDICTOR_LABELS
    if model == "ols":
        fit = ols_fit(add_intercept(Xtr), ytr, names)
        return {"table": fit.table(), "r2": fit.r2, "adj_r2": fit.adj_r2}, fit.predict(add_intercept(Xva))
    if model == "gd":
        res = gradient_descent_fit(Xtr, ytr, cfg.gd_config)
        return ({"scaled_coefficients": dict(zip(names, res.theta)), "iterations": res.iterations,
                 "converged": res.converged}, res.predict(Xva))
    if model == "lasso":
        path = lasso_cv(Xtr, ytr, cfg.lambdas, cfg.cv_folds, cfg.seed, PREDICTOR_LABELS)
        i = path.best_index
        return ({"best_lambda": path.best_lambda, "n_shrunk": path.n_zero(i),
                 "scaled_coefficients": dict(zip(names, np.r_[path.intercept, path.coefs[i]]))},
                path.predict(Xva, i))
    res = backward_subset(Xtr, ytr, Xva, yva, PREDICTOR_LABELS, cfg.subset_criterion)
    cols, fit = refit_subset(res, Xtr, ytr, PREDICTOR_LABELS)
    return {"rows": res.rows, "best_features": res.best_features}, fit.predict(add_intercept(Xva[:, cols]))


def cmd_fit(args):
    cfg = _config(args)
    Xtr, ytr, Xva, yva, _, _ = regression_data(load_rows(cfg), cfg)
    summary, pred = _fit(args.model, cfg, Xtr, ytr, Xva, yva)
    summary["validation_rmse"] = rmse(pred, yva)
    _emit(summary)


def cmd_evaluate(args):
    cfg = _config(args)
    Xtr, ytr, Xva, yva, _, _ = regression_data(load_rows(cfg), cfg)
    keys = {"ols": "ols", "gradient_descent": "gd", "lasso": "lasso", "subset": "subset"}
    rows = []
    for key, label in MODEL_ROWS:
        _, pred = _fit(keys[key], cfg, Xtr, ytr, Xva, yva)
        rows.append({"model": label, "rmse": rmse(pred, yva)})
    out = _out_dir(args)
    if out:
        with open(out / "rmse.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["model", "rmse"])
            w.writerows([[r["model"], f"{r['rmse']:.10g}"] for r in rows])
    _emit(rows)


# ------------------------------------------------------------------ parser


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="pipeline config JSON")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument("--seed", type=int, default=default, help="override the config seed")


def _series_flags(parser):
    parser.add_argument("--series", help="CSV with date,value columns instead of the config data")
    parser.add_argument("--period", type=int, default=12, help="seasonal period of --series")


def _arima_flags(parser):
    parser.add_argument("--order", help="fixed order p,d,q (default: automatic search)")
    parser.add_argument("--drift", action="store_true", help="estimate a constant with --order")
    parser.add_argument("--p-max", type=int, default=5)
    parser.add_argument("--q-max", type=int, default=5)
    parser.add_argument("--d-max", type=int, default=2)


def build_parser():
    parser = argparse.ArgumentParser(prog="mmforecast", description=__doc__)
    _global_flags(parser, suppress=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    add("pipeline", cmd_pipeline, "run every stage and write the report")
    p = add("ingest", cmd_ingest, "parse and validate one source CSV")
    p.add_argument("path")
    p.add_argument("--schema", required=True, choices=sorted(dataio.SCHEMAS))
    p.add_argument("--clean", action="store_true", help="deduplicate and sort")
    add("describe", cmd_describe, "summary statistics of the merged table")
    add("corr", cmd_corr, "Pearson correlation matrix")
    p = add("adf", cmd_adf, "augmented Dickey-Fuller test")
    _series_flags(p)
    p.add_argument("--lag", default="auto")
    p = add("decompose", cmd_decompose, "moving-average seasonal decomposition")
    _series_flags(p)
    p.add_argument("--mode", choices=["additive", "multiplicative"], default="additive")
    p = add("arima", cmd_arima, "fit ARIMA (automatic order search by default)")
    _series_flags(p)
    _arima_flags(p)
    p = add("hw", cmd_hw, "fit Holt-Winters smoothing")
    _series_flags(p)
    p.add_argument("--mode", choices=["additive", "multiplicative"], default="additive")
    p = add("forecast", cmd_forecast, "point forecasts from ARIMA or Holt-Winters")
    _series_flags(p)
    _arima_flags(p)
    p.add_argument("--model", choices=["arima", "hw"], default="hw")
    p.add_argument("--mode", choices=["additive", "multiplicative"], default="additive")
    p.add_argument("--horizon", type=int, default=12)
    p = add("pca", cmd_pca, "principal components of the predictors")
    p.add_argument("--standardized", action="store_true")
    p = add("fit", cmd_fit, "fit one regression model on the training split")
    p.add_argument("--model", choices=["ols", "gd", "lasso", "subset"], required=True)
    add("evaluate", cmd_evaluate, "validation RMSE of every regression model")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except MMForecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
