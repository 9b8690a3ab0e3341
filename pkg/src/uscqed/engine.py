"""Backend selection for the propagation kernel.

Imports the compiled Cython kernel when available; otherwise falls back to
the pure-NumPy implementation of the same algorithm.  Set the environment
variable USCQED_PURE_PYTHON=1 before import to force the fallback (used by
the backend-equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("USCQED_PURE_PYTHON", "").strip() in ("1", "true", "yes"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernel_py

propagate = _impl.propagate
BACKEND = _impl.BACKEND


def available_backends():
    """Names of the kernels importable in this environment."""
    names = ["python"]
    try:
        from . import _kernel  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def get_kernel(name: str):
    """Fetch a specific kernel module by name ("compiled" or "python")."""
    if name == "python":
        return _kernel_py
    if name == "compiled":
        from . import _kernel

        return _kernel
    raise ValueError(f"unknown backend {name!r}")
