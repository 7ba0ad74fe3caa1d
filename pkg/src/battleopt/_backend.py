"""Pick the phase-kernel implementation at import time.

``BATTLEOPT_BACKEND`` may be ``auto`` (default: compiled if importable),
``cython`` (fail if the extension is missing) or ``python``.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

AVAILABLE = {"python": _kernels_py}
if _compiled is not None:
    AVAILABLE["cython"] = _compiled


def get_kernels(name: str = "auto"):
    if name == "auto":
        return AVAILABLE.get("cython", _kernels_py)
    try:
        return AVAILABLE[name]
    except KeyError:
        raise ImportError(
            f"kernel backend {name!r} is not available (have: {sorted(AVAILABLE)})"
        ) from None


kernels = get_kernels(os.environ.get("BATTLEOPT_BACKEND", "auto"))
