"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``GIRYLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if not os.environ.get("GIRYLAB_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

measurable_graphs = _impl.measurable_graphs
affine_graphs = _impl.affine_graphs
refine_partition = _impl.refine_partition

DEFAULT_MAX_ENUM = 10**6
MAX_ENUM_ENV = "GIRYLAB_MAX_ENUM"


def max_enum() -> int:
    """Enumeration cap: ``GIRYLAB_MAX_ENUM`` if set, else 10**6."""
    raw = os.environ.get(MAX_ENUM_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_MAX_ENUM
