"""Kernel backend selection: compiled extension if present, else pure Python.

Set ``MODCLUST_PURE_PYTHON=1`` to force the Python twin (used by the parity
tests and the kernel benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("MODCLUST_PURE_PYTHON") == "1":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND: str = kernels.BACKEND
HAVE_COMPILED: bool = BACKEND == "compiled"
