"""Hot numeric kernels with two interchangeable implementations.

``TRANCHELAB_BACKEND`` selects the set at import time:

* ``numba`` -- ``@njit`` compiled loops (default when numba imports),
* ``numpy`` -- pure-numpy code vectorized across runs,
* ``auto``  -- numba if available, otherwise numpy.

Both sets expose the same functions and consume random numbers in the same
order. Results agree to floating-point noise; within one backend they are
bit-reproducible.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

BACKEND_ENV = "TRANCHELAB_BACKEND"
BACKENDS = ("numba", "numpy")


def load(name: str) -> ModuleType:
    if name not in BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; choose from {BACKENDS}")
    return importlib.import_module(f"{__name__}._{name}")


def _select() -> ModuleType:
    wanted = os.environ.get(BACKEND_ENV, "auto").strip().lower() or "auto"
    if wanted == "auto":
        try:
            return load("numba")
        except ImportError:
            return load("numpy")
    return load(wanted)


active = _select()
backend_name: str = active.NAME


def use(name: str) -> ModuleType:
    """Switch the process-wide backend (tests and benchmarks)."""
    global active, backend_name
    active = load(name)
    backend_name = active.NAME
    return active
