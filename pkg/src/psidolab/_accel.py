"""Optional numba acceleration.

The compiled kernels are used when numba imports cleanly and the environment
variable ``PSIDOLAB_DISABLE_NUMBA`` is unset or ``0``. ``PSIDOLAB_THREADS``
caps the numba thread pool.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("PSIDOLAB_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by PSIDOLAB_DISABLE_NUMBA")
    import numba
    from numba import njit

    HAVE_NUMBA = True
    _threads = os.environ.get("PSIDOLAB_THREADS")
    if _threads:
        numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # identity decorator so kernels stay importable as plain Python
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def backend() -> str:
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return "numba" if HAVE_NUMBA else "numpy"
