"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy implementation in ``_kernels_py``. ``DIRAC_WALK_BACKEND=python`` forces
the fallback, ``DIRAC_WALK_BACKEND=cython`` makes a missing extension an error.
"""
import os
from types import ModuleType

from . import _kernels_py


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


def get_kernels(name: str = "auto") -> ModuleType:
    if name == "python":
        return _kernels_py
    compiled = _load_compiled()
    if name == "cython":
        if compiled is None:
            raise ImportError("compiled kernels not built; run `pip install -e . --no-build-isolation`")
        return compiled
    if name != "auto":
        raise ValueError(f"unknown backend {name!r}; expected auto, cython or python")
    return compiled if compiled is not None else _kernels_py


kernels = get_kernels(os.environ.get("DIRAC_WALK_BACKEND", "auto"))
BACKEND = kernels.NAME
