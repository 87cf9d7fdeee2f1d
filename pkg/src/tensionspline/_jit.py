"""Numba switch.

Kernels are compiled with ``numba.njit`` when numba is importable and the
environment variable ``TENSIONSPLINE_DISABLE_JIT`` is unset (or ``0``).
Otherwise the pure NumPy / Python fallbacks in :mod:`tensionspline.kernels`
are used.  Both paths perform the same floating point operations in the same
order, so results agree bit for bit.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

ENV_FLAG = "TENSIONSPLINE_DISABLE_JIT"

HAS_NUMBA = numba is not None
ENABLE_JIT = HAS_NUMBA and os.environ.get(ENV_FLAG, "0").strip() in ("", "0")


def njit(func):
    """Compile ``func`` in nopython mode with on-disk caching, or return None."""
    if not HAS_NUMBA:
        return None
    return numba.njit(cache=True)(func)
