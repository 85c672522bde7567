"""Backend selection for the statevector gate kernels.

MVSP_NUMBA=0 forces the pure-numpy path, MVSP_NUMBA=1 requires numba (import
error if missing), unset/anything else auto-detects.  Both backend modules
stay importable regardless of the flag; only the dispatch binding changes.
"""
from __future__ import annotations

import os

from . import _kernels_np

_flag = os.environ.get("MVSP_NUMBA", "").strip()

if _flag == "0":
    BACKEND = "numpy"
    apply_gate = _kernels_np.apply_gate
else:
    try:
        from . import _kernels_nb

        BACKEND = "numba"
        apply_gate = _kernels_nb.apply_gate
    except ImportError:
        if _flag == "1":
            raise
        BACKEND = "numpy"
        apply_gate = _kernels_np.apply_gate
