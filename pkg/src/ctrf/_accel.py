"""JIT selection.

Hot kernels are written once as plain Python loops and compiled with numba
when it is importable and ``CTRF_NO_NUMBA`` is unset (or "0").  Every kernel
module also ships a vectorized numpy implementation; ``USE_NUMBA`` decides
which one the public entry points dispatch to.
"""

from __future__ import annotations

import os

_flag = os.environ.get("CTRF_NO_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled


def njit(*args, **kwargs):
    """``numba.njit`` with caching and nogil on; identity when numba is absent."""
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)
