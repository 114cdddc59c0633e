"""Optional numba acceleration.

Set ``KRONSPLIT_DISABLE_JIT=1`` to force the vectorised numpy fallbacks.
"""
import os

_disabled = os.environ.get("KRONSPLIT_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and not _disabled


def njit(func):
    """Compile with numba when available; otherwise return ``func`` unchanged."""
    if _njit is None:
        return func
    return _njit(cache=True)(func)
