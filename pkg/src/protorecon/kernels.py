"""Backend selection for the hot kernels.

PROTORECON_BACKEND=numba|numpy picks the implementation; the default is
numba when it imports, falling back to the pure-numpy path otherwise.
Both backends expose loss_and_grad and hungarian with identical
signatures and conventions.
"""

from __future__ import annotations

import os
import warnings

from . import _kernels_numpy

_BACKENDS = {}


def _load_numba():
    from . import _kernels_numba

    return _kernels_numba


def get_backend(name: str | None = None):
    """Return the kernel module for `name` (or the environment's choice)."""
    if name is None:
        name = os.environ.get("PROTORECON_BACKEND", "").strip().lower() or "auto"
    if name in _BACKENDS:
        return _BACKENDS[name]
    if name == "numpy":
        mod = _kernels_numpy
    elif name == "numba":
        mod = _load_numba()
    elif name == "auto":
        try:
            mod = _load_numba()
        except ImportError:
            warnings.warn("numba unavailable; using the pure-numpy kernel backend")
            mod = _kernels_numpy
    else:
        raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")
    _BACKENDS[name] = mod
    return mod


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        _load_numba()
        names.insert(0, "numba")
    except ImportError:
        pass
    return names


def backend_name() -> str:
    mod = get_backend()
    return "numpy" if mod is _kernels_numpy else "numba"
