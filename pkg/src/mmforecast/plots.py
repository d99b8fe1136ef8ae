"""Standalone SVG charts drawn from a pipeline report."""
import logging
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

log = logging.getLogger(__name__)

WIDTH, HEIGHT = 640, 400
MARGIN = 50
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
           "#7f7f7f", "#bcbd22", "#17becf"]


def _num(x):
    return f"{x:.2f}"


class Canvas:
    def __init__(self, title, width=WIDTH, height=HEIGHT):
        self.width, self.height = width, height
        self.parts = []
        self.text(width / 2, 20, title, anchor="middle", size=14, cls="title")

    def text(self, x, y, s, anchor="start", size=10, cls="label"):
        self.parts.append(f'<text class="{cls}" x="{_num(x)}" y="{_num(y)}" font-size="{size}" '
                          f'text-anchor="{anchor}">{escape(str(s))}</text>')

    def line(self, x1, y1, x2, y2, color="#000", cls="line", dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<line class="{cls}" x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" '
                          f'y2="{_num(y2)}" stroke="{color}"{extra}/>')

    def polyline(self, pts, color, cls="series"):
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        self.parts.append(f'<polyline class="{cls}" points="{coords}" fill="none" '
                          f'stroke="{color}" stroke-width="1.5"/>')

    def rect(self, x, y, w, h, color, cls="bar"):
        self.parts.append(f'<rect class="{cls}" x="{_num(x)}" y="{_num(y)}" width="{_num(w)}" '
                          f'height="{_num(h)}" fill="{color}"/>')

    def circle(self, x, y, r, color, cls="marker"):
        self.parts.append(f'<circle class="{cls}" cx="{_num(x)}" cy="{_num(y)}" r="{r}" fill="{color}"/>')

    def render(self):
        body = "\n".join(self.parts)
        return ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n'
                f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n')


class Panel:
    """Maps data coordinates onto a rectangle of a canvas."""

    def __init__(self, canvas, xlim, ylim, box=None, label=None):
        self.c = canvas
        x0, y0, x1, y1 = box or (MARGIN, MARGIN, canvas.width - MARGIN, canvas.height - MARGIN)
        self.box = (x0, y0, x1, y1)
        self.xlim = _pad(xlim)
        self.ylim = _pad(ylim)
        canvas.line(x0, y1, x1, y1, cls="axis")
        canvas.line(x0, y0, x0, y1, cls="axis")
        canvas.text(x0 - 4, y0 + 4, f"{self.ylim[1]:.4g}", anchor="end", size=8)
        canvas.text(x0 - 4, y1, f"{self.ylim[0]:.4g}", anchor="end", size=8)
        if label:
            canvas.text(x0 + 4, y0 - 4, label, size=10)

    def x(self, v):
        x0, _, x1, _ = self.box
        lo, hi = self.xlim
        return x0 + (v - lo) / (hi - lo) * (x1 - x0)

    def y(self, v):
        _, y0, _, y1 = self.box
        lo, hi = self.ylim
        return y1 - (v - lo) / (hi - lo) * (y1 - y0)

    def series(self, xs, ys, color, cls="series"):
        pts = [(self.x(a), self.y(b)) for a, b in zip(xs, ys) if b is not None]
        if pts:
            self.c.polyline(pts, color, cls)


def _pad(lim):
    lo, hi = float(lim[0]), float(lim[1])
    if hi == lo:
        return lo - 1.0, hi + 1.0
    return lo, hi


def _finite(values):
    return [v for v in values if v is not None]


def _legend(canvas, names):
    for i, name in enumerate(names):
        y = MARGIN + 14 * i
        canvas.rect(canvas.width - MARGIN - 120, y - 8, 10, 8, PALETTE[i % len(PALETTE)], cls="legend")
        canvas.text(canvas.width - MARGIN - 106, y, name, size=9)


def returns_histogram(stage):
    counts, edges = stage["histogram_counts"], stage["histogram_edges"]
    c = Canvas("Histogram of monthly returns")
    p = Panel(c, (edges[0], edges[-1]), (0, max(counts)))
    for k, n in enumerate(counts):
        x0, x1 = p.x(edges[k]), p.x(edges[k + 1])
        c.rect(x0, p.y(n), max(x1 - x0 - 1, 0.5), p.y(0) - p.y(n), PALETTE[0])
    return c.render()


def decomposition_panel(stage):
    c = Canvas(f"Decomposition ({stage['mode']})", height=640)
    n = len(stage["observed"])
    names = ["observed", "trend", "seasonal_series", "remainder"]
    h = (c.height - 2 * MARGIN) / 4
    for i, name in enumerate(names):
        ys = stage[name]
        vals = _finite(ys)
        box = (MARGIN, MARGIN + i * h + 10, c.width - MARGIN, MARGIN + (i + 1) * h - 10)
        p = Panel(c, (0, n - 1), (min(vals), max(vals)), box=box, label=name.replace("_series", ""))
        p.series(range(n), ys, PALETTE[i])
    return c.render()


def pacf_stems(stage):
    values, band = stage["values"], stage["band"]
    c = Canvas("Partial autocorrelation")
    lim = max(max(abs(v) for v in values), band) * 1.1
    p = Panel(c, (0, len(values) + 1), (-lim, lim))
    c.line(p.x(0), p.y(0), p.x(len(values) + 1), p.y(0), cls="zero")
    for lag, v in enumerate(values, start=1):
        c.line(p.x(lag), p.y(0), p.x(lag), p.y(v), PALETTE[0], cls="stem")
        c.circle(p.x(lag), p.y(v), 3, PALETTE[0])
    for level in (band, -band):
        c.line(p.x(0), p.y(level), p.x(len(values) + 1), p.y(level), PALETTE[1],
               cls="threshold", dash="4,3")
    return c.render()


def forecast_overlay(history, stage):
    c = Canvas("Forecast: Holt-Winters (red) vs ARIMA (blue)")
    hist = history["values"]
    models = [(k, stage[k]) for k in ("arima", "holt_winters") if stage.get(k)]
    horizon = max(len(v) for _, v in models)
    vals = hist + [x for _, v in models for x in v]
    n = len(hist)
    p = Panel(c, (0, n + horizon - 1), (min(vals), max(vals)))
    p.series(range(n), hist, "#000000", cls="history")
    colors = {"arima": PALETTE[0], "holt_winters": PALETTE[1]}
    for name, v in models:
        p.series(range(n - 1, n + len(v)), [hist[-1]] + v, colors[name], cls=f"forecast-{name}")
    return c.render()


def lasso_shrinkage(stage):
    lam = np.log10(np.asarray(stage["lambdas"]))
    coefs = np.asarray(stage["coef_path"], dtype=float)
    c = Canvas("Lasso coefficient shrinkage (x: log10 lambda)")
    p = Panel(c, (lam.min(), lam.max()), (coefs.min(), coefs.max()))
    for j, name in enumerate(stage["labels"]):
        p.series(lam, coefs[:, j], PALETTE[j % len(PALETTE)])
    _legend(c, stage["labels"])
    return c.render()


def lasso_cv_curve(stage):
    lam = np.log10(np.asarray(stage["lambdas"]))
    mean = np.asarray(stage["cv_mean_errors"], dtype=float)
    se = np.asarray(stage["cv_std_errors"], dtype=float)
    c = Canvas("Lasso cross-validation RMSE (x: log10 lambda)")
    p = Panel(c, (lam.min(), lam.max()), ((mean - se).min(), (mean + se).max()))
    for x, m, s in zip(lam, mean, se):
        c.line(p.x(x), p.y(m - s), p.x(x), p.y(m + s), "#999999", cls="errorbar")
        c.circle(p.x(x), p.y(m), 2, PALETTE[1])
    best = np.log10(stage["best_lambda"])
    c.line(p.x(best), p.box[1], p.x(best), p.box[3], "#000000", cls="best", dash="4,3")
    return c.render()


def predicted_vs_actual(stage):
    actual, pred = stage["actual"], stage["predicted"]
    c = Canvas(f"Validation: actual vs predicted ({stage['model']})")
    n = len(actual)
    p = Panel(c, (0, n), (min(0.0, min(actual + pred)), max(actual + pred)))
    w = (p.x(1) - p.x(0)) / 2.5
    for i, (a, b) in enumerate(zip(actual, pred)):
        c.rect(p.x(i) + 1, p.y(a), w, p.y(0) - p.y(a), PALETTE[0], cls="bar-actual")
        c.rect(p.x(i) + 1 + w, p.y(b), w, p.y(0) - p.y(b), PALETTE[1], cls="bar-predicted")
    _legend(c, ["actual", "predicted"])
    return c.render()


PLOTS = [
    ("returns_histogram.svg", ("returns",), lambda s: returns_histogram(s["returns"])),
    ("decomposition.svg", ("decomposition",), lambda s: decomposition_panel(s["decomposition"])),
    ("pacf.svg", ("pacf",), lambda s: pacf_stems(s["pacf"])),
    ("forecast.svg", ("forecast", "series"), lambda s: forecast_overlay(s["series"], s["forecast"])),
    ("lasso_path.svg", ("lasso",), lambda s: lasso_shrinkage(s["lasso"])),
    ("lasso_cv.svg", ("lasso",), lambda s: lasso_cv_curve(s["lasso"])),
    ("predicted_vs_actual.svg", ("predictions",), lambda s: predicted_vs_actual(s["predictions"])),
]


def render_plots(report, out_dir, skipped=None):
    """Write one SVG per available chart; missing stages are noted in ``skipped``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, needs, draw in PLOTS:
        missing = [s for s in needs if s not in report.stages]
        if missing:
            log.info("plot %s skipped: stage %s unavailable", name, missing[0])
            if skipped is not None:
                skipped[name] = f"stage {missing[0]!r} unavailable"
            continue
        path = out / name
        path.write_text(draw(report.stages), encoding="utf-8")
        written.append(path)
    return written
