"""Kernel backend selection.

The compiled extension ``detrep._ckernels`` is used when it imports;
otherwise the NumPy fallback ``detrep._pykernels`` is used.  Setting the
environment variable ``DETREP_KERNELS=python`` forces the fallback.
:func:`use_backend` switches at runtime (the benchmark relies on it).
"""

import contextlib
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_impl = _pykernels if os.environ.get("DETREP_KERNELS") == "python" or _ckernels is None else _ckernels


def available_backends():
    return sorted(_BACKENDS)


def backend():
    """Name of the active backend."""
    return "cython" if _impl is _ckernels and _ckernels is not None else "python"


def set_backend(name):
    global _impl
    try:
        _impl = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}") from None


@contextlib.contextmanager
def use_backend(name):
    previous = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def poly_mul(a, b):
    return _impl.poly_mul(a, b)


def poly_eval(c, pts):
    return _impl.poly_eval(c, pts)


def poly_substitute(c, T):
    return _impl.poly_substitute(c, T)


def kron_deltas(A1, B1, C1, A2, B2, C2):
    return _impl.kron_deltas(A1, B1, C1, A2, B2, C2)
