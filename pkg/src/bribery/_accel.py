"""Optional numba acceleration.

Set ``BRIBERY_NO_NUMBA=1`` to force the pure-numpy code paths (useful for
debugging and for the benchmark that compares both).
"""

import os

USE_NUMBA = os.environ.get("BRIBERY_NO_NUMBA", "").strip() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
