"""Optional numba acceleration.

Set ``BELLMD_DISABLE_NUMBA=1`` to run every kernel as plain Python/numpy.
The flag is read once at import time.
"""
from __future__ import annotations

import os

_DISABLED = os.environ.get("BELLMD_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def jit(fn):
    """``numba.njit(cache=True)`` when enabled, identity otherwise.

    The undecorated function stays reachable as ``fn.py_func`` in both cases
    so benchmarks can compare the two paths in one process.
    """
    if NUMBA_ENABLED:
        compiled = _njit(cache=True)(fn)
        return compiled
    fn.py_func = fn
    return fn
