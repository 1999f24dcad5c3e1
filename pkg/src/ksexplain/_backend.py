"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
``KSEXPLAIN_BACKEND=python`` (or ``cython``) forces a choice at import time.
"""
from __future__ import annotations

import contextlib
import os
import warnings

from . import _pykernels

try:
    from . import _kernels as _ckernels
except ImportError:  # extension not built
    _ckernels = None

_AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    _AVAILABLE["cython"] = _ckernels


def available() -> list[str]:
    return sorted(_AVAILABLE)


def _resolve(name: str | None):
    if name in (None, "", "auto"):
        return _AVAILABLE.get("cython", _pykernels)
    try:
        return _AVAILABLE[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {available()}") from None


def _initial():
    requested = os.environ.get("KSEXPLAIN_BACKEND", "auto").strip().lower()
    try:
        return _resolve(requested)
    except ValueError as exc:
        warnings.warn(f"{exc}; falling back to the numpy kernels", RuntimeWarning, stacklevel=2)
        return _pykernels


kernels = _initial()


def current() -> str:
    return kernels.BACKEND


def set_backend(name: str | None) -> str:
    global kernels
    kernels = _resolve(name)
    return kernels.BACKEND


@contextlib.contextmanager
def use_backend(name: str | None):
    global kernels
    previous = kernels
    kernels = _resolve(name)
    try:
        yield kernels
    finally:
        kernels = previous
