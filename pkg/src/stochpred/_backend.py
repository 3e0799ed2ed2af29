"""Kernel backend selection.

The hot simulation kernels exist twice: a numba ``@njit`` version and a
pure-numpy fallback.  The active backend is chosen by the environment
variable ``STOCHPRED_BACKEND`` (``numba`` or ``numpy``); the default is
numba when it imports, numpy otherwise.  ``set_backend`` allows switching
at runtime (used by tests and the backend benchmark).
"""

from __future__ import annotations

import os

ENV_VAR = "STOCHPRED_BACKEND"
_VALID = ("numba", "numpy")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    HAS_NUMBA = False


def _resolve_initial() -> str:
    forced = os.environ.get(ENV_VAR, "").strip().lower()
    if forced and forced not in _VALID:
        raise ValueError(f"{ENV_VAR} must be one of {_VALID}, got {forced!r}")
    if forced == "numba" and not HAS_NUMBA:
        raise RuntimeError(f"{ENV_VAR}=numba but numba is not importable")
    if forced:
        return forced
    return "numba" if HAS_NUMBA else "numpy"


_active = _resolve_initial()


def get_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    name = name.strip().lower()
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _active = name
