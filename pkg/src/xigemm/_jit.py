"""Numba switch.

Set ``XIGEMM_DISABLE_JIT=1`` to force the pure-numpy kernels. The numpy path
is also used when numba is not importable.
"""
import os

_disabled = os.environ.get("XIGEMM_DISABLE_JIT", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

HAVE_NUMBA = _nb is not None
USE_NUMBA = HAVE_NUMBA and not _disabled


def njit(fn):
    """``numba.njit(cache=True)`` when numba is available, identity otherwise.

    fastmath stays off: the float kernels promise a fixed accumulation order.
    """
    if not HAVE_NUMBA:
        return fn
    return _nb.njit(cache=True, fastmath=False)(fn)
