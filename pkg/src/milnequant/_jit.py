"""Numba shim.

Kernels are written once in the numba-compatible subset of Python/numpy.
Setting ``MILNEQUANT_NO_NUMBA=1`` (or running without numba installed)
leaves them as plain Python functions operating on numpy scalars/arrays.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("MILNEQUANT_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

NUMBA_ENABLED = numba is not None and not _DISABLED


def njit(*args, **kwargs):
    """``numba.njit(cache=True, nogil=True)`` or an identity decorator."""
    if NUMBA_ENABLED:
        opts = {"cache": True, "nogil": True}
        opts.update(kwargs)
        if len(args) == 1 and callable(args[0]):
            return numba.njit(**opts)(args[0])
        return numba.njit(*args, **opts)

    if len(args) == 1 and callable(args[0]):
        return args[0]

    def wrap(fn):
        return fn

    return wrap


def python_impl(fn):
    """Return the un-jitted implementation of a kernel."""
    return getattr(fn, "py_func", fn)
