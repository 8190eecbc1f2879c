"""JIT dispatch: numba-accelerated kernels with a pure-NumPy/Python fallback.

Set HELIOS_NO_NUMBA=1 to force the interpreted fallback (useful on platforms
without a working numba toolchain, and for the benchmark baseline). The two
paths run the same source; only the decorator changes.
"""
import os

USE_NUMBA = os.environ.get("HELIOS_NO_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)

if USE_NUMBA:  # pragma: no cover - exercised via kernel tests both ways
    try:
        from numba import njit as _njit

        def jit(func):
            return _njit(cache=True, nogil=True)(func)

    except ImportError:
        USE_NUMBA = False

        def jit(func):
            return func

else:

    def jit(func):
        return func
