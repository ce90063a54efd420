"""Backend selection for the search kernels.

The compiled module is used when it imports and ``RAINBOWSUB_PURE_PYTHON``
is unset. ``BACKEND`` names the active implementation.
"""

import os

from . import _pykernels as python

MAX_C_COLORS = 64

try:
    if os.environ.get("RAINBOWSUB_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

BACKEND = "cython" if compiled is not None else "python"
active = compiled if compiled is not None else python


def backends():
    """All importable kernel modules keyed by name."""
    out = {"python": python}
    if compiled is not None:
        out["cython"] = compiled
    return out
