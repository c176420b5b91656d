"""Kernel backend selection.

The compiled extension is used when it imports; set ``QALLOC_PURE_PYTHON=1``
to force the pure-Python kernels (useful for debugging and for comparing
backends).
"""
import os

from . import _pykernels

kernels = _pykernels
if not os.environ.get("QALLOC_PURE_PYTHON"):
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        pass

BACKEND = kernels.NAME


def available_backends():
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
