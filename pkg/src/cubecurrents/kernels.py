"""Selects the compiled kernels when available, else the numpy fallback."""

from __future__ import annotations

from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _compiled if _compiled is not None else _kernels_py


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def backend() -> str:
    return "compiled" if _active is _compiled else "python"


def use_backend(name: str) -> None:
    """Switch kernels globally; ``name`` is ``"python"`` or ``"compiled"``."""
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def scan_crossings(mats, arcs, lo: float, hi: float, shared_tol: float):
    return _active.scan_crossings(mats, arcs, lo, hi, shared_tol)


def path_distance(zre, zim, frames, lengths):
    return _active.path_distance(zre, zim, frames, lengths)
