"""Stepping-kernel backend selection.

The hot per-pass loops exist twice: numba-compiled scalar loops
(_kernels_numba) and vectorised numpy (_kernels_numpy).  Selection is
controlled by the BFNWAVE_BACKEND environment variable:

    auto  (default)  numba if importable, else numpy
    numba            require the compiled kernels
    numpy            force the pure-numpy fallback

Both backends step identically (bit-for-bit trajectories); see
benchmarks/benchmark_backends.py for the speed comparison.
"""

from __future__ import annotations

import os

_active: tuple[str, object] | None = None


def _select() -> tuple[str, object]:
    choice = os.environ.get("BFNWAVE_BACKEND", "auto").strip().lower() or "auto"
    if choice == "numpy":
        from . import _kernels_numpy as mod

        return "numpy", mod
    if choice == "numba":
        from . import _kernels_numba as mod

        return "numba", mod
    if choice == "auto":
        try:
            from . import _kernels_numba as mod

            return "numba", mod
        except ImportError:
            from . import _kernels_numpy as mod

            return "numpy", mod
    raise ValueError(
        f"unknown BFNWAVE_BACKEND {choice!r}; expected auto, numba, or numpy"
    )


def kernels():
    """The active kernel module (selected once per process)."""
    global _active
    if _active is None:
        _active = _select()
    return _active[1]


def active_backend() -> str:
    """Name of the active backend: 'numba' or 'numpy'."""
    global _active
    if _active is None:
        _active = _select()
    return _active[0]
