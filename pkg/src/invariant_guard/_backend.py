"""Backend selection for the hot kernels.

The MUSCL reconstruction loops dominate runtime, so each carries a numba
``@njit`` implementation next to a pure-numpy one.  ``INVARIANT_GUARD_NUMBA=0``
forces the numpy path; by default numba is used whenever it imports.
``benchmarks/bench_kernels.py`` compares the two.
"""

import os

_ENV_FLAG = "INVARIANT_GUARD_NUMBA"

try:
    from numba import njit  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        """Stand-in decorator when numba is unavailable."""
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def numba_enabled():
    """True when the njit kernel variants should be dispatched."""
    flag = os.environ.get(_ENV_FLAG, "").strip().lower()
    if flag in ("0", "false", "no", "off"):
        return False
    if flag in ("1", "true", "yes", "on"):
        if not HAVE_NUMBA:
            raise RuntimeError(f"{_ENV_FLAG} requested numba but it is not importable")
        return True
    return HAVE_NUMBA


def backend_name():
    return "numba" if numba_enabled() else "numpy"
