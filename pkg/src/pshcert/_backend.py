"""Kernel backend selection.

The package ships every hot kernel in two flavors: a numba ``@njit``
compiled loop and a vectorized pure-numpy fallback. Which flavor is
exported under the plain kernel name is decided once, at import time,
from the ``PSHCERT_BACKEND`` environment variable:

    auto   use numba when it imports cleanly, else numpy (default)
    numba  require numba; raise if it is unavailable
    numpy  force the pure-numpy fallbacks

Thread count for numba (when it uses threads at all) is controlled by
the standard ``NUMBA_NUM_THREADS`` variable. All kernels here are
sequential reductions, so results do not depend on the thread count.
"""

from __future__ import annotations

import os

_choice = os.environ.get("PSHCERT_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"PSHCERT_BACKEND must be 'auto', 'numba' or 'numpy', got {_choice!r}"
    )

NUMBA_AVAILABLE = False
_njit = None
if _choice in ("auto", "numba"):
    try:
        from numba import njit as _njit  # noqa: F401

        NUMBA_AVAILABLE = True
    except ImportError:
        if _choice == "numba":
            raise RuntimeError("PSHCERT_BACKEND=numba but numba is not importable")

USING_NUMBA = NUMBA_AVAILABLE and _choice != "numpy"
BACKEND_NAME = "numba" if USING_NUMBA else "numpy"


def compile_kernel(func):
    """Compile ``func`` with numba when available, else return ``None``."""
    if _njit is None:
        return None
    return _njit(cache=False)(func)
