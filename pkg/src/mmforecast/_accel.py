"""Backend switch for the hot numeric kernels.

Every kernel in :mod:`mmforecast.kernels` exists twice: a scalar-loop version
compiled with ``numba.njit`` and a vectorised pure-numpy version. The loop
versions are used when numba imports and ``MMFORECAST_NUMBA`` is not set to a
false value (``0``, ``false``, ``no``, ``off``). The flag is read once at
import time.
"""
import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

ENV_FLAG = "MMFORECAST_NUMBA"


def _flag_enabled(value):
    return value.strip().lower() not in ("0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and _flag_enabled(os.environ.get(ENV_FLAG, "1"))


def njit(fn):
    """Compile ``fn`` with numba when available, else return it unchanged."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def backend():
    return "numba" if USE_NUMBA else "numpy"
