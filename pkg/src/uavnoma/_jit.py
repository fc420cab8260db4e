"""Numba switch.

Set ``UAVNOMA_DISABLE_JIT=1`` before import to run every kernel through its
pure-numpy / pure-python path instead of numba.
"""
import os

_FLAG = os.environ.get("UAVNOMA_DISABLE_JIT", "0").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when enabled, identity otherwise.

    Works both bare (``@njit``) and called (``@njit(nogil=True)``).
    """
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        if USE_NUMBA:
            return numba.njit(cache=True)(fn)
        return fn

    def wrap(fn):
        if USE_NUMBA:
            return numba.njit(*args, cache=True, **kwargs)(fn)
        return fn

    return wrap
