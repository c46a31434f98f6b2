"""Rate reduction: average-pool decimation and rational-factor resampling."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import CortegError
from .design import design_butterworth
from .filters import filter_forward


def avg_pool_decimate(x: np.ndarray, fs_in: float, fs_out: float) -> np.ndarray:
    """Non-overlapping block means along the last axis.

    Requires an integer ratio; a trailing partial block is dropped. The output
    sample k summarizes input block [k*R, (k+1)*R), i.e. it is stamped at the
    block start and never looks past its own block.
    """
    if fs_out > fs_in:
        raise CortegError(f"avg_pool_decimate: fs_out {fs_out} > fs_in {fs_in}")
    ratio = fs_in / fs_out
    r = int(round(ratio))
    if abs(ratio - r) > 1e-9:
        raise CortegError(f"avg_pool_decimate: non-integer ratio {ratio}")
    arr = np.asarray(x)
    n = (arr.shape[-1] // r) * r
    trimmed = arr[..., :n]
    shape = trimmed.shape[:-1] + (n // r, r)
    return trimmed.reshape(shape).mean(axis=-1)


def resample_rational(x: np.ndarray, fs_in: float, fs_out: float,
                      order: int = 8) -> np.ndarray:
    """Upsample (zero-stuff) / lowpass / downsample for non-integer ratios.

    The anti-alias lowpass is causal, so the output stays causal up to the
    fixed group delay of the filter.
    """
    frac = Fraction(fs_out / fs_in).limit_denominator(1000)
    up, down = frac.numerator, frac.denominator
    if up < 1 or down < 1:
        raise CortegError(f"resample_rational: bad ratio {fs_out}/{fs_in}")
    arr = np.asarray(x, dtype=np.float64)
    squeeze = arr.ndim == 1
    if squeeze:
        arr = arr[None, :]
    stuffed = np.zeros(arr.shape[:-1] + (arr.shape[-1] * up,))
    stuffed[..., ::up] = arr * up
    fs_up = fs_in * up
    cutoff = 0.49 * min(fs_in, fs_out)
    lp = design_butterworth("lowpass", order, cutoff, fs_up)
    smoothed = filter_forward(lp, stuffed)
    out = smoothed[..., ::down]
    return out[0] if squeeze else out


def decimate_to(x: np.ndarray, fs_in: float, fs_out: float) -> np.ndarray:
    """Average-pool when the ratio is an integer, else rational resampling."""
    ratio = fs_in / fs_out
    if abs(ratio - round(ratio)) < 1e-9:
        return avg_pool_decimate(x, fs_in, fs_out)
    return resample_rational(x, fs_in, fs_out)
