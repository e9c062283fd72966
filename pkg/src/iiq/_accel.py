"""numba switch.

Set ``IIQ_DISABLE_NUMBA=1`` to force the pure-numpy kernels. Without numba
installed the fallback is used automatically.
"""

from __future__ import annotations

import os
import warnings

DISABLED = os.environ.get("IIQ_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False
    if not DISABLED:
        warnings.warn("numba is not available; using the slower numpy kernels", RuntimeWarning,
                      stacklevel=2)

USE_NUMBA = HAS_NUMBA and not DISABLED


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
