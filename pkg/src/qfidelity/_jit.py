"""JIT switch for the numeric kernels.

Kernels are written in the numpy subset numba understands, so the same source
runs compiled or as plain numpy.  Set ``QFIDELITY_DISABLE_NUMBA=1`` (before
import) to get the pure-numpy path, e.g. for debugging or for comparing the
two backends.
"""

import os

_FLAG = os.environ.get("QFIDELITY_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None

NUMBA_ENABLED = NUMBA_REQUESTED and _nb is not None
BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def njit(func):
    """Compile ``func`` in nopython mode when the numba backend is active."""
    if NUMBA_ENABLED:
        return _nb.njit(cache=True, nogil=True)(func)
    return func
