"""Kernel dispatch: the compiled extension when built, else pure Python.

Set ``D2DPDA_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("D2DPDA_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
pair_violations = _impl.pair_violations
phi_candidates = _impl.phi_candidates
xor_into = _impl.xor_into

__all__ = ["BACKEND", "pair_violations", "phi_candidates", "xor_into"]
