"""Time each numeric kernel under the numba and numpy backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--json out.json]

Both tables in mmforecast.kernels.IMPLEMENTATIONS are called on the same
inputs. The numba entries are warmed up once first so compile time is not
counted.
"""
import argparse
import json
import sys
import timeit

import numpy as np

from mmforecast.kernels import IMPLEMENTATIONS


def workloads(rng):
    A = rng.normal(size=(7, 7))
    S = A @ A.T
    x = rng.normal(size=500).cumsum()
    z = x - x.mean()
    r = np.array([z[: len(z) - k] @ z[k:] for k in range(21)]) / (z @ z)
    w = rng.normal(size=500)
    t = np.arange(216)
    y = 25000 + 50 * t + 3000 * np.sin(2 * np.pi * t / 12) + rng.normal(0, 500, 216)
    season0 = np.ascontiguousarray(y[:12] - y[:12].mean())
    hw_args = (y, 12)
    init = (float(y[:12].mean()), 50.0, season0, False)
    ticks = np.arange(0, 1.0001, 0.05)
    a, b, g = (np.ascontiguousarray(v.ravel()) for v in np.meshgrid(ticks, ticks, ticks,
                                                                    indexing="ij"))
    X = rng.normal(size=(175, 7))
    X = (X - X.mean(0)) / X.std(0, ddof=1)
    yl = X @ rng.normal(size=7) + rng.normal(size=175)
    yl -= yl.mean()
    lambdas = np.logspace(10, np.log10(0.002), 100)
    return {
        "jacobi_eigen": ("jacobi_eigen", (S, 1e-12, 100)),
        "durbin_levinson": ("durbin_levinson", (r, 20)),
        "css_residuals": ("css_residuals", (w, np.array([0.5]), np.array([0.3, -0.2]), 0.1)),
        "hw_filter": ("hw_filter", hw_args + (0.3, 0.1, 0.2) + init),
        "hw_sse_grid (9261 triples)": ("hw_sse_grid", hw_args + (a, b, g) + init),
        "lasso_cd (100 lambdas)": ("lasso_cd", (X, yl, lambdas, 1e-7, 10_000)),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write results to this file")
    args = parser.parse_args(argv)

    cases = workloads(np.random.default_rng(0))
    results = []
    for label, (name, call_args) in cases.items():
        row = {"kernel": label}
        for backend in ("numba", "numpy"):
            fn = IMPLEMENTATIONS[backend][name]
            fn(*call_args)
            timer = timeit.Timer(lambda: fn(*call_args))
            loops, _ = timer.autorange()
            best = min(timer.repeat(args.repeat, loops)) / loops
            row[backend] = best
        row["speedup"] = row["numpy"] / row["numba"]
        results.append(row)

    print(f"{'kernel':<28s}{'numba':>14s}{'numpy':>14s}{'numpy/numba':>14s}")
    for row in results:
        print(f"{row['kernel']:<28s}{row['numba'] * 1e6:>12.1f}us{row['numpy'] * 1e6:>12.1f}us"
              f"{row['speedup']:>13.1f}x")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(results, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
