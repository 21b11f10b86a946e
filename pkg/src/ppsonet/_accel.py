"""Select between numba-compiled kernels and the pure-numpy fallback.

Set ``PPSONET_DISABLE_NUMBA=1`` before import to force the numpy path.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional speedup
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("PPSONET_DISABLE_NUMBA", "").strip().lower() in _FALSY


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
