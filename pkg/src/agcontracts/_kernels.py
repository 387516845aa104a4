"""Kernel backend chosen at import: the compiled extension when it was built,
otherwise the numpy fallback."""
from __future__ import annotations

try:
    from . import _core as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built
    from . import _core_py as _impl

    BACKEND = "python"

pivot = _impl.pivot
run_simplex = _impl.run_simplex
rollout = _impl.rollout

__all__ = ["BACKEND", "pivot", "run_simplex", "rollout"]
