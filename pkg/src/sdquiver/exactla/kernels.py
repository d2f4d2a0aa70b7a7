"""Backend selection for the integer elimination kernels.

The compiled module is used when it imports; ``SDQUIVER_PURE=1`` in the
environment forces the pure-Python implementation.
"""

from __future__ import annotations

import os

from sdquiver.exactla import _kernels_py

BACKEND = "python"
det_int = _kernels_py.det_int
rank_int = _kernels_py.rank_int
rref_int = _kernels_py.rref_int

if os.environ.get("SDQUIVER_PURE", "") not in ("1", "true", "yes"):
    try:
        from sdquiver.exactla import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        det_int = _ckernels.det_int
        rank_int = _ckernels.rank_int
        rref_int = _ckernels.rref_int

__all__ = ["BACKEND", "det_int", "rank_int", "rref_int"]
