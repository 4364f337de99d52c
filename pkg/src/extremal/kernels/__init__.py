"""Counting kernels with a numba fast path and a pure-numpy fallback.

The backend is chosen once at import from ``EXTREMAL_KERNELS``
(``numba`` or ``numpy``); ``numba`` is the default when it imports.
Object-dtype (exact big-integer) work always runs on the numpy path.
"""

import logging
import os

from . import _numpy as numpy_impl

log = logging.getLogger(__name__)

INT64_SAFE = (1 << 63) - 1

try:
    from . import _numba as numba_impl
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None

_requested = os.environ.get("EXTREMAL_KERNELS", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"EXTREMAL_KERNELS must be 'numba' or 'numpy', got {_requested!r}")
if _requested == "numba" and numba_impl is None:
    log.warning("numba unavailable; falling back to numpy kernels")
    _requested = "numpy"

BACKEND = _requested


def get(backend: str | None = None):
    """Kernel module for ``backend`` (default: the import-time selection)."""
    name = backend or BACKEND
    if name == "numba":
        if numba_impl is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return numba_impl
    if name == "numpy":
        return numpy_impl
    raise ValueError(f"unknown kernel backend {name!r}")
