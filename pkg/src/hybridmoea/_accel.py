"""Numba switch.

Kernels are compiled with numba unless ``HYBRIDMOEA_NUMBA=0`` is set in the
environment or numba cannot be imported, in which case the vectorized numpy
implementations in :mod:`hybridmoea.kernels` are used instead.
"""

from __future__ import annotations

import os
from typing import Any, Callable

_FLAG = "HYBRIDMOEA_NUMBA"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get(_FLAG, "1").strip().lower() not in ("0", "false", "no", "off")


def njit(*args: Any, **kwargs: Any) -> Callable:
    """``numba.njit`` when available, otherwise an identity decorator."""
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)
