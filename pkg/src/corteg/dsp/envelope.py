"""Analytic-signal amplitude envelope via the full-length FFT method."""

from __future__ import annotations

import numpy as np

from ..errors import CortegError


def hilbert_envelope(x: np.ndarray) -> np.ndarray:
    """|analytic signal| of each row, doubling positive frequencies.

    Accepts (T,) or (C, T). The whole series enters one FFT, so values near
    both ends carry edge effects; callers that need split-safe output compute
    the envelope per segment (see :func:`split_envelope`).
    """
    arr = np.asarray(x, dtype=np.float64)
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[None, :]
    n = arr.shape[-1]
    if n < 4:
        raise CortegError(f"hilbert_envelope: series too short ({n} samples)")
    spec = np.fft.fft(arr, axis=-1)
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    analytic = np.fft.ifft(spec * h, axis=-1)
    env = np.abs(analytic)
    return env[0] if squeeze else env


def split_envelope(x: np.ndarray, boundary: int | None) -> np.ndarray:
    """Envelope whose first ``boundary`` samples depend only on x[..., :boundary].

    The FFT envelope is global, so a plain full-length pass would let late
    samples perturb early output. Computing the pre-boundary part from the
    truncated series keeps everything before ``boundary`` invariant to edits
    at or after it; the tail is taken from the full-length pass so it still
    sees all available history.
    """
    if boundary is None:
        return hilbert_envelope(x)
    arr = np.asarray(x, dtype=np.float64)
    n = arr.shape[-1]
    if not 4 <= boundary <= n:
        raise CortegError(f"split_envelope: boundary {boundary} outside [4, {n}]")
    head = hilbert_envelope(arr[..., :boundary])
    if boundary == n:
        return head
    tail = hilbert_envelope(arr)[..., boundary:]
    return np.concatenate([head, tail], axis=-1)
