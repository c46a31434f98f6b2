"""Causal application of biquad cascades, with kernel selection at import."""

from __future__ import annotations

import numpy as np

from .design import BiquadCascade

try:
    from . import _kernels as _impl

    HAVE_COMPILED_KERNEL = True
except ImportError:  # pragma: no cover - depends on build environment
    from . import _kernels_py as _impl

    HAVE_COMPILED_KERNEL = False


def filter_forward(cascade: BiquadCascade, x: np.ndarray) -> np.ndarray:
    """Single-pass causal filtering along the last axis, zero initial state.

    Accepts (T,) or (C, T); returns float64 output of the same shape and
    length. The input is never modified.
    """
    arr = np.asarray(x, dtype=np.float64)
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[None, :]
    work = np.ascontiguousarray(arr.copy())
    sos = np.ascontiguousarray(cascade.sos, dtype=np.float64)
    out = _impl.sosfilt(sos, work)
    return out[0] if squeeze else out
