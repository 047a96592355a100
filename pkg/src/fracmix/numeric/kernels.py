"""Kernel backend selection.

The compiled extension is used when it imports; set FRACMIX_PURE_PYTHON=1 to
force the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
riesz_sum = _kernels_py.riesz_sum
interp_sum = _kernels_py.interp_sum

if os.environ.get("FRACMIX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        riesz_sum = _compiled.riesz_sum
        interp_sum = _compiled.interp_sum

__all__ = ["BACKEND", "riesz_sum", "interp_sum"]
