"""Backend selection for the hot kernels.

The compiled Cython extension is preferred; the pure-Python module is the
fallback.  Set SUBSETSEL_PURE_PYTHON=1 to force the fallback (used by the
benchmark and the backend-equivalence tests).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SUBSETSEL_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
cd_sweep_inplace = _impl.cd_sweep_inplace
oracle_enumerate = _impl.oracle_enumerate


def available_backends() -> dict:
    """Map backend name -> kernel module, for side-by-side benchmarking."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels
        out["cython"] = _kernels
    except ImportError:
        pass
    return out
