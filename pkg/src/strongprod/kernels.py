"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin. Set ``STRONGPROD_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels


def _load() -> ModuleType:
    if os.environ.get("STRONGPROD_PURE_PYTHON") == "1":
        return _pykernels
    try:
        from . import _kernels
    except ImportError:
        return _pykernels
    return _kernels


backend: ModuleType = _load()
BACKEND: str = backend.BACKEND


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _pykernels}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out


def thread_count() -> int:
    """Worker cap from ``STRONGPROD_THREADS`` (default 1)."""
    raw = os.environ.get("STRONGPROD_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
