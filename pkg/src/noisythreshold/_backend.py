"""Backend selection: compiled kernels when built, pure Python otherwise.

Set ``NOISYTHRESHOLD_BACKEND=python`` (or ``cython``) to force a choice;
the default picks the compiled extension if it imports.
"""

from __future__ import annotations

import os

from . import _kernels_py

try:
    from . import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None

_BACKENDS = {"python": _kernels_py}
if _kernels_cy is not None:
    _BACKENDS["cython"] = _kernels_cy


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend(name: str = "auto"):
    """Return the kernel module for ``name`` ("auto", "cython", "python")."""
    if name == "auto":
        name = os.environ.get("NOISYTHRESHOLD_BACKEND", "auto")
    if name == "auto":
        name = "cython" if _kernels_cy is not None else "python"
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        ) from None


DEFAULT_BACKEND = get_backend().BACKEND_NAME
