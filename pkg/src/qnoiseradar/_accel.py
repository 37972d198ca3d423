"""Optional numba acceleration.

Set ``QNOISERADAR_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The
flag is read once, at import time.
"""

import os

DISABLE_FLAG = "QNOISERADAR_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get(DISABLE_FLAG, "").strip().lower() not in ("1", "true", "yes")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


def prange(*args):
    if HAVE_NUMBA:
        return numba.prange(*args)
    return range(*args)  # pragma: no cover
