"""Band-splitting a cleaned recording into the two model input streams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import CortegError, FilterDesignError
from .design import design_butterworth
from .envelope import split_envelope
from .filters import filter_forward
from .resample import decimate_to

NYQUIST_MARGIN_HZ = 4.0
CAPPED_LOW_EDGE_HZ = 60.0


@dataclass(frozen=True)
class StreamSpec:
    """One stream: band edges in Hz, output rate in Hz, envelope yes/no."""

    band: tuple[float, float]
    rate: float
    envelope: bool = False

    def __post_init__(self):
        lo, hi = self.band
        if not 0 < lo < hi:
            raise CortegError(f"StreamSpec: bad band {self.band}")
        if self.rate <= 0:
            raise CortegError(f"StreamSpec: bad rate {self.rate}")


LFS_SPEC = StreamSpec(band=(1.0, 64.0), rate=128.0, envelope=False)
HGA_SPEC = StreamSpec(band=(70.0, 200.0), rate=200.0, envelope=True)


def effective_band(spec: StreamSpec, fs: float) -> tuple[float, float]:
    """Cap the band against the native Nyquist.

    When the nominal high edge does not fit, the band falls back to
    (60, Nyquist - 4) Hz, mirroring how lower-rate recordings are handled.
    """
    lo, hi = spec.band
    limit = fs / 2.0 - NYQUIST_MARGIN_HZ
    if hi > limit:
        hi = limit
        lo = min(lo, CAPPED_LOW_EDGE_HZ)
    if hi <= lo:
        raise FilterDesignError(
            f"stream band ({lo}, {hi}) empty after Nyquist capping at fs={fs}"
        )
    return (lo, hi)


def extract_stream(x: np.ndarray, fs: float, spec: StreamSpec,
                   env_boundary: int | None = None,
                   bandpass_order: int = 4) -> np.ndarray:
    """Bandpass, optionally envelope, then decimate to the stream rate.

    ``env_boundary`` (native-rate sample index) makes the envelope's first
    samples independent of anything at or after the boundary; see
    :func:`corteg.dsp.envelope.split_envelope`.
    """
    band = effective_band(spec, fs)
    bp = design_butterworth("bandpass", bandpass_order, band, fs)
    y = filter_forward(bp, x)
    if spec.envelope:
        y = split_envelope(y, env_boundary)
    return decimate_to(y, fs, spec.rate)


def make_streams(x: np.ndarray, fs: float,
                 lfs: StreamSpec = LFS_SPEC, hga: StreamSpec = HGA_SPEC,
                 env_boundary: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """The (low-frequency, high-gamma-envelope) stream pair for one recording."""
    lo = extract_stream(x, fs, lfs, env_boundary=None)
    hi = extract_stream(x, fs, hga, env_boundary=env_boundary)
    return lo, hi


def notch_cascade(fs: float, mains_hz: float, order: int = 3,
                  half_width_hz: float = 2.0, max_harmonic_hz: float = 180.0):
    """Band-stop cascades for the mains frequency and harmonics up to 180 Hz."""
    cascades = []
    k = 1
    limit = fs / 2.0 - 1.0
    while True:
        f = mains_hz * k
        if f > max_harmonic_hz or f + half_width_hz >= limit:
            break
        cascades.append(
            design_butterworth("bandstop", order, (f - half_width_hz, f + half_width_hz), fs)
        )
        k += 1
    return cascades


def apply_notches(x: np.ndarray, fs: float, mains_hz: float | None) -> np.ndarray:
    """Run the mains notches when a mains frequency is declared."""
    if mains_hz is None:
        return np.asarray(x, dtype=np.float64)
    y = np.asarray(x, dtype=np.float64)
    for cascade in notch_cascade(fs, mains_hz):
        y = filter_forward(cascade, y)
    return y
