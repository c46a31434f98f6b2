"""Montage-level cleanup: common average reference and channel rejection."""

from __future__ import annotations

import numpy as np

from ..errors import CortegError

STD_FLOOR = 1e-6
VAR_HIGH = 5.0
VAR_LOW = 0.2


def common_average_reference(x: np.ndarray) -> np.ndarray:
    """Subtract the instantaneous cross-channel mean from every channel."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise CortegError(f"common_average_reference: needs >=2 channels, got {arr.shape}")
    return arr - arr.mean(axis=0, keepdims=True)


def reject_channels(x: np.ndarray) -> np.ndarray:
    """Indices of channels that survive the variance heuristic.

    Dropped: std below 1e-6, or variance above 5x / below 0.2x the
    across-channel median variance.
    """
    arr = np.asarray(x, dtype=np.float64)
    std = arr.std(axis=-1)
    var = std * std
    alive = std >= STD_FLOOR
    if alive.any():
        med = np.median(var[alive])
        if med > 0:
            alive &= (var <= VAR_HIGH * med) & (var >= VAR_LOW * med)
    kept = np.flatnonzero(alive)
    if kept.size == 0:
        raise CortegError("reject_channels: every channel rejected")
    return kept
