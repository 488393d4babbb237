"""Kernel backend selection.

Hot inner loops (triangle fill, void-space fill, SSAO, LIC) exist in two
functionally identical flavors: a numba ``@njit`` kernel and a pure-numpy
twin. ``VDK_NUMBA=0`` forces the numpy path; otherwise numba is used when
importable. Both twins accumulate in the same order so results agree
bitwise, not just approximately.

``VDK_THREADS`` caps the numba thread pool. All shipped kernels are
serial, so any value keeps renders deterministic; the variable exists so
deterministic mode can be pinned explicitly (golden tests use 1).
"""

import os

USE_NUMBA = os.environ.get("VDK_NUMBA", "1") != "0"

if USE_NUMBA:
    try:
        import numba

        _threads = os.environ.get("VDK_THREADS")
        if _threads:
            numba.set_num_threads(max(1, int(_threads)))
    except ImportError:
        USE_NUMBA = False


def njit_or_none(func):
    """Return a compiled version of ``func`` or None when numba is off."""
    if not USE_NUMBA:
        return None
    import numba

    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
