import shutil

import numpy as np
import pytest

from mmforecast.kernels import IMPLEMENTATIONS
from mmforecast.synthetic import bundled_dir


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(IMPLEMENTATIONS))
def impl(request):
    """Kernel table for one backend; tests using it run on both."""
    return IMPLEMENTATIONS[request.param]


@pytest.fixture
def bundled(tmp_path):
    """Copy of the bundled synthetic dataset and config in a scratch directory."""
    dst = tmp_path / "data"
    shutil.copytree(bundled_dir(), dst)
    return dst


def simulate_arma(rng, n, ar=(), ma=(), mu=0.0, burn=200):
    ar, ma = np.asarray(ar, float), np.asarray(ma, float)
    e = rng.normal(size=n + burn)
    x = np.zeros(n + burn)
    for t in range(n + burn):
        val = e[t]
        for i, a in enumerate(ar):
            if t - i - 1 >= 0:
                val += a * x[t - i - 1]
        for j, b in enumerate(ma):
            if t - j - 1 >= 0:
                val += b * e[t - j - 1]
        x[t] = val
    return x[burn:] + mu


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
