"""Hot-kernel backend selection: compiled extension with numpy fallback.

The compiled Cython kernels are used when the extension imports; otherwise
the numpy implementation takes over with identical semantics.  Set the
LITKG_BACKEND environment variable (or pass ``backend=`` explicitly) to
"c" or "numpy" to force a choice; the parity tests and the benchmark do.
"""

from __future__ import annotations

import os

from . import numpy_backend

try:
    from . import _ckernels
except ImportError:  # extension not built; numpy fallback applies
    _ckernels = None


def available_backends() -> list[str]:
    names = ["numpy"]
    if _ckernels is not None:
        names.append("c")
    return names


def get_backend(name: str | None = None):
    """Resolve a backend module by name, env var, or availability."""
    if name is None:
        name = os.environ.get("LITKG_BACKEND", "auto")
    name = name.lower()
    if name in ("auto", ""):
        return _ckernels if _ckernels is not None else numpy_backend
    if name in ("c", "compiled", "cython"):
        if _ckernels is None:
            raise RuntimeError(
                "compiled backend requested but litkg.backends._ckernels is not built"
            )
        return _ckernels
    if name in ("numpy", "python", "py"):
        return numpy_backend
    raise ValueError(f"unknown backend {name!r}, expected 'auto', 'c', or 'numpy'")
