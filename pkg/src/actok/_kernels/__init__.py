"""Merge-kernel backend selection.

The compiled Cython backend is preferred when its extension module was
built; the numpy fallback is always available and produces identical
output. ``ACTOK_KERNELS=python`` or ``=compiled`` forces a backend at
import time; ``set_backend`` switches at runtime (used by the kernel
benchmark and the parity tests).
"""

from __future__ import annotations

import os

from . import _merge_py

_BACKENDS: dict[str, object] = {"python": _merge_py}
try:
    from . import _merge_cy
    _BACKENDS["compiled"] = _merge_cy
except ImportError:
    _merge_cy = None

_active = "python"
apply_merge = _merge_py.apply_merge
encode_stream = _merge_py.encode_stream


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def get_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active, apply_merge, encode_stream
    if name not in _BACKENDS:
        raise ValueError(
            f"unknown kernel backend {name!r}; available: {available_backends()}")
    mod = _BACKENDS[name]
    apply_merge = mod.apply_merge
    encode_stream = mod.encode_stream
    _active = name


_requested = os.environ.get("ACTOK_KERNELS")
if _requested:
    set_backend(_requested)
elif "compiled" in _BACKENDS:
    set_backend("compiled")
