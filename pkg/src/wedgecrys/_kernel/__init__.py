"""Kernel lane selection.

Two implementations of the hot packed-matrix kernels exist: a compiled
Cython lane (built at install time) and a pure-Python lane.  The compiled
lane is used whenever it imported successfully, the modulus fits its
64-bit arithmetic, and WEDGECRYS_PURE is not set.
"""
import importlib
import os

from . import pylane


def _load_compiled():
    if os.environ.get("WEDGECRYS_PURE"):
        return None
    try:
        return importlib.import_module("wedgecrys._kernel._cylane")
    except ImportError:
        return None


_compiled = _load_compiled()


def active_lane() -> str:
    """Name of the lane picked for small moduli ('cython' or 'python')."""
    return "cython" if _compiled is not None else "python"


def impl_for(q: int):
    """Kernel module to use for modulus q."""
    if _compiled is not None and q <= _compiled.MAX_Q:
        return _compiled
    return pylane
