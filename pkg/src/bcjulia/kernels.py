"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``BCJULIA_PURE_PYTHON`` is set to a non-empty value,
the numpy implementation is used.  Both expose ``escape_time`` and
``raymarch`` with identical signatures.
"""
import importlib
import os

from bcjulia import _pykernels


def load_backend(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("bcjulia._ckernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends() -> list[str]:
    names = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("BCJULIA_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        _impl = load_backend("cython")
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

escape_time = _impl.escape_time
raymarch = _impl.raymarch
