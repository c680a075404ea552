"""Hot Monte Carlo kernels.

The numba backend is used when available; set ``ORDLAB_BACKEND=numpy`` to
force the pure-numpy path.  Both are importable directly for benchmarking.
"""

import os

from . import _numpy as numpy_backend

BACKEND = os.environ.get("ORDLAB_BACKEND", "numba").lower()

if BACKEND == "numba":
    try:
        from . import _numba as numba_backend
    except ImportError:  # pragma: no cover - numba missing
        numba_backend = None
        BACKEND = "numpy"
else:
    numba_backend = None
    BACKEND = "numpy"

_impl = numba_backend if BACKEND == "numba" else numpy_backend

pattern_counts = _impl.pattern_counts
below_counts = _impl.below_counts

__all__ = ["BACKEND", "pattern_counts", "below_counts", "numpy_backend", "numba_backend"]
