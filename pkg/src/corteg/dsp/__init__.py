"""Causal preprocessing: filter design/application, envelopes, rate reduction,
montage cleanup, band-splitting, and window construction."""

from .design import BiquadCascade, design_butterworth
from .envelope import hilbert_envelope, split_envelope
from .filters import HAVE_COMPILED_KERNEL, filter_forward
from .reference import common_average_reference, reject_channels
from .resample import avg_pool_decimate, decimate_to, resample_rational
from .streams import (
    HGA_SPEC,
    LFS_SPEC,
    StreamSpec,
    apply_notches,
    effective_band,
    extract_stream,
    make_streams,
    notch_cascade,
)
from .windows import (
    AUDIO_SPLIT,
    FINGER_SPLIT,
    TEST,
    TRAIN,
    VAL,
    NormStats,
    WindowSet,
    decimated_length,
    load_windowset,
    plan_labels,
    save_windowset,
    split_assign,
    stream_end_index,
    window_dataset,
)

__all__ = [
    "BiquadCascade", "design_butterworth",
    "hilbert_envelope", "split_envelope",
    "HAVE_COMPILED_KERNEL", "filter_forward",
    "common_average_reference", "reject_channels",
    "avg_pool_decimate", "decimate_to", "resample_rational",
    "HGA_SPEC", "LFS_SPEC", "StreamSpec", "apply_notches", "effective_band",
    "extract_stream", "make_streams", "notch_cascade",
    "AUDIO_SPLIT", "FINGER_SPLIT", "TEST", "TRAIN", "VAL", "NormStats",
    "WindowSet", "decimated_length", "load_windowset", "plan_labels",
    "save_windowset", "split_assign", "stream_end_index", "window_dataset",
]
