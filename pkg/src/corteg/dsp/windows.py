"""Causal sliding windows over the two streams, chronological splits, and
train-only normalization statistics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CortegError

TRAIN, VAL, TEST = 0, 1, 2
SPLIT_NAMES = {TRAIN: "train", VAL: "val", TEST: "test"}

FINGER_SPLIT = (0.6, 2.0 / 30.0, 1.0 / 3.0)   # 2:1 train/test, last 10% of train as val
AUDIO_SPLIT = (0.8, 0.1, 0.1)


def decimated_length(n_in: int, fs_in: float, fs_out: float) -> int:
    """Output length of :func:`corteg.dsp.resample.decimate_to` without running it."""
    ratio = fs_in / fs_out
    if abs(ratio - round(ratio)) < 1e-9:
        return n_in // int(round(ratio))
    from fractions import Fraction

    frac = Fraction(fs_out / fs_in).limit_denominator(1000)
    return -(-n_in * frac.numerator // frac.denominator)


def stream_end_index(j: int, fs: float, target_fs: float) -> int:
    """Exclusive stream index for the window labelled by target sample j.

    Exact rational arithmetic: the window ends strictly at or before the
    label time, never after it.
    """
    from fractions import Fraction

    ratio = Fraction(fs).limit_denominator(10**6) / Fraction(target_fs).limit_denominator(10**6)
    return int(j * ratio.numerator // ratio.denominator)


def plan_labels(n_target: int, target_fs: float, len_lo: int, len_hi: int,
                fs_lo: float, fs_hi: float, lookback_s: float,
                stride_s: float) -> np.ndarray:
    """Target-sample indices usable as window labels.

    A label at index j (time j / target_fs) consumes stream samples strictly
    before its own time, so every window is causal by construction.
    """
    step = int(round(stride_s * target_fs))
    if step < 1 or abs(step - stride_s * target_fs) > 1e-6:
        raise CortegError(
            f"stride {stride_s}s is not a whole number of target samples at {target_fs} Hz"
        )
    n_lo = int(round(lookback_s * fs_lo))
    n_hi = int(round(lookback_s * fs_hi))
    labels = []
    for j in range(0, n_target, step):
        end_lo = stream_end_index(j, fs_lo, target_fs)
        end_hi = stream_end_index(j, fs_hi, target_fs)
        if end_lo < n_lo or end_hi < n_hi:
            continue
        if end_lo > len_lo or end_hi > len_hi:
            break
        labels.append(j)
    if not labels:
        raise CortegError("recording shorter than the lookback window")
    return np.asarray(labels, dtype=np.int64)


def split_assign(n_windows: int, fractions: tuple[float, float, float]) -> np.ndarray:
    ftr, fva, fte = fractions
    total = ftr + fva + fte
    if not 0.999 <= total <= 1.001 or min(fractions) < 0:
        raise CortegError(f"split fractions {fractions} do not sum to 1")
    n_train = int(np.floor(ftr * n_windows))
    n_val = int(np.floor(fva * n_windows))
    out = np.full(n_windows, TEST, dtype=np.int8)
    out[:n_train] = TRAIN
    out[n_train : n_train + n_val] = VAL
    return out


@dataclass
class NormStats:
    lo_mu: np.ndarray
    lo_sd: np.ndarray
    hi_mu: np.ndarray
    hi_sd: np.ndarray
    y_mu: np.ndarray
    y_sd: np.ndarray
    degenerate_target: bool = False


@dataclass
class WindowSet:
    """Normalized windows of both streams plus aligned z-scored targets.

    ``lo`` (N, C, n_lo) and ``hi`` (N, C, n_hi) are float32 and already carry
    the train-window affine; ``split`` holds 0/1/2 for train/val/test in
    chronological order.
    """

    subject: str
    lo: np.ndarray
    hi: np.ndarray
    y: np.ndarray
    y_raw: np.ndarray
    split: np.ndarray
    label_idx: np.ndarray
    target_fs: float
    channel_xyz: np.ndarray
    channel_names: list[str]
    norm: NormStats
    meta: dict = field(default_factory=dict)

    @property
    def n_windows(self) -> int:
        return self.lo.shape[0]

    @property
    def n_channels(self) -> int:
        return self.lo.shape[1]

    @property
    def d_out(self) -> int:
        return self.y.shape[1]

    def indices(self, split: int) -> np.ndarray:
        return np.flatnonzero(self.split == split)

    def train_fraction_indices(self, f: float) -> np.ndarray:
        """Chronologically-first fraction of the train pool (deterministic)."""
        idx = self.indices(TRAIN)
        if not 0.0 <= f <= 1.0:
            raise CortegError(f"fraction {f} outside [0, 1]")
        return idx[: int(np.floor(f * idx.size))]

    def drop_channel(self, c: int) -> "WindowSet":
        """View with channel ``c`` removed from both streams and the montage."""
        if self.n_channels < 2:
            raise CortegError("drop_channel: single-channel subject")
        keep = [i for i in range(self.n_channels) if i != c]
        return WindowSet(
            subject=self.subject,
            lo=self.lo[:, keep], hi=self.hi[:, keep],
            y=self.y, y_raw=self.y_raw, split=self.split,
            label_idx=self.label_idx, target_fs=self.target_fs,
            channel_xyz=self.channel_xyz[keep],
            channel_names=[self.channel_names[i] for i in keep],
            norm=self.norm, meta=self.meta,
        )


def window_dataset(lo: np.ndarray, hi: np.ndarray, fs_lo: float, fs_hi: float,
                   target: np.ndarray, target_fs: float,
                   lookback_s: float = 1.0, stride_s: float = 0.05,
                   fractions: tuple[float, float, float] = FINGER_SPLIT,
                   subject: str = "s0",
                   channel_xyz: np.ndarray | None = None,
                   channel_names: list[str] | None = None,
                   meta: dict | None = None) -> WindowSet:
    """Cut causal windows, split chronologically, z-score with train stats.

    Normalization statistics are computed over train-split window contents
    only and the identical affine is applied to val/test, so edits to sample
    values outside the train region cannot move them.
    """
    lo = np.asarray(lo)
    hi = np.asarray(hi)
    target = np.asarray(target, dtype=np.float64)
    if target.ndim == 1:
        target = target[:, None]
    if lo.ndim != 2 or hi.ndim != 2 or lo.shape[0] != hi.shape[0]:
        raise CortegError(f"window_dataset: stream shapes {lo.shape} / {hi.shape}")
    n_lo = int(round(lookback_s * fs_lo))
    n_hi = int(round(lookback_s * fs_hi))
    labels = plan_labels(target.shape[0], target_fs, lo.shape[1], hi.shape[1],
                         fs_lo, fs_hi, lookback_s, stride_s)
    split = split_assign(labels.size, fractions)

    n = labels.size
    c = lo.shape[0]
    lo_w = np.empty((n, c, n_lo), dtype=np.float64)
    hi_w = np.empty((n, c, n_hi), dtype=np.float64)
    for i, j in enumerate(labels):
        end_lo = stream_end_index(int(j), fs_lo, target_fs)
        end_hi = stream_end_index(int(j), fs_hi, target_fs)
        lo_w[i] = lo[:, end_lo - n_lo : end_lo]
        hi_w[i] = hi[:, end_hi - n_hi : end_hi]
    y_raw = target[labels]

    tr = split == TRAIN
    lo_mu = lo_w[tr].mean(axis=(0, 2))
    lo_sd = lo_w[tr].std(axis=(0, 2))
    hi_mu = hi_w[tr].mean(axis=(0, 2))
    hi_sd = hi_w[tr].std(axis=(0, 2))

    alive = (lo_sd >= 1e-6) & (hi_sd >= 1e-6)
    if not alive.any():
        raise CortegError("window_dataset: all channels degenerate on train split")
    keep = np.flatnonzero(alive)
    lo_w, hi_w = lo_w[:, keep], hi_w[:, keep]
    lo_mu, lo_sd, hi_mu, hi_sd = lo_mu[keep], lo_sd[keep], hi_mu[keep], hi_sd[keep]

    y_mu = y_raw[tr].mean(axis=0)
    y_sd = y_raw[tr].std(axis=0)
    degenerate = bool((y_sd < 1e-9).any())
    y_sd = np.where(y_sd < 1e-9, 1.0, y_sd)

    lo_w = (lo_w - lo_mu[None, :, None]) / lo_sd[None, :, None]
    hi_w = (hi_w - hi_mu[None, :, None]) / hi_sd[None, :, None]
    y = (y_raw - y_mu) / y_sd

    xyz = np.zeros((keep.size, 3)) if channel_xyz is None else np.asarray(channel_xyz)[keep]
    names = ([f"ch{i}" for i in keep] if channel_names is None
             else [channel_names[i] for i in keep])
    return WindowSet(
        subject=subject,
        lo=lo_w.astype(np.float32), hi=hi_w.astype(np.float32),
        y=y.astype(np.float32), y_raw=y_raw.astype(np.float32),
        split=split, label_idx=labels, target_fs=float(target_fs),
        channel_xyz=np.asarray(xyz, dtype=np.float64),
        channel_names=names,
        norm=NormStats(lo_mu, lo_sd, hi_mu, hi_sd, y_mu, y_sd, degenerate),
        meta=meta or {},
    )


def save_windowset(ws: WindowSet, path) -> None:
    import json

    np.savez_compressed(
        path,
        lo=ws.lo, hi=ws.hi, y=ws.y, y_raw=ws.y_raw, split=ws.split,
        label_idx=ws.label_idx, channel_xyz=ws.channel_xyz,
        lo_mu=ws.norm.lo_mu, lo_sd=ws.norm.lo_sd,
        hi_mu=ws.norm.hi_mu, hi_sd=ws.norm.hi_sd,
        y_mu=ws.norm.y_mu, y_sd=ws.norm.y_sd,
        meta=np.frombuffer(json.dumps({
            "subject": ws.subject,
            "target_fs": ws.target_fs,
            "channel_names": ws.channel_names,
            "degenerate_target": ws.norm.degenerate_target,
            **ws.meta,
        }).encode(), dtype=np.uint8),
    )


def load_windowset(path) -> WindowSet:
    import json

    with np.load(path) as z:
        meta = json.loads(bytes(z["meta"]).decode())
        norm = NormStats(z["lo_mu"], z["lo_sd"], z["hi_mu"], z["hi_sd"],
                         z["y_mu"], z["y_sd"], meta.pop("degenerate_target", False))
        return WindowSet(
            subject=meta.pop("subject"),
            lo=z["lo"], hi=z["hi"], y=z["y"], y_raw=z["y_raw"],
            split=z["split"], label_idx=z["label_idx"],
            target_fs=meta.pop("target_fs"),
            channel_xyz=z["channel_xyz"],
            channel_names=meta.pop("channel_names"),
            norm=norm, meta=meta,
        )
