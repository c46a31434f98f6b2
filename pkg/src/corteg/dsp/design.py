"""Butterworth IIR design as cascaded biquads via the bilinear transform.

``order`` is the analog prototype order: a bandpass/bandstop of prototype
order N carries 2N digital poles (N sections); lowpass/highpass carry N poles
(ceil(N/2) sections). All cascades are checked for stability at design time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import FilterDesignError


@dataclass(frozen=True)
class BiquadCascade:
    """Second-order sections, each row (b0, b1, b2, a1, a2) with a0 == 1."""

    sos: np.ndarray
    fs: float

    @property
    def n_sections(self) -> int:
        return self.sos.shape[0]

    def response(self, freqs) -> np.ndarray:
        """Complex H(e^{j 2 pi f / fs}) evaluated from the coefficients."""
        freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
        z1 = np.exp(-2j * np.pi * freqs / self.fs)
        z2 = z1 * z1
        h = np.ones_like(z1, dtype=np.complex128)
        for b0, b1, b2, a1, a2 in self.sos:
            h *= (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2)
        return h

    def gain(self, freqs) -> np.ndarray:
        return np.abs(self.response(freqs))


def _prototype_poles(order: int) -> list[complex]:
    """Left-half-plane poles of the unit-cutoff analog Butterworth filter."""
    return [
        cmath.exp(1j * math.pi * (2 * k + order + 1) / (2 * order))
        for k in range(order)
    ]


def _prewarp(f: float, fs: float) -> float:
    return 2.0 * fs * math.tan(math.pi * f / fs)


def _bilinear(s_poles, s_zeros, fs: float):
    """Map s-plane poles/zeros to the z plane; missing zeros land at z=-1."""
    fs2 = 2.0 * fs
    z_poles = [(fs2 + p) / (fs2 - p) for p in s_poles]
    z_zeros = [(fs2 + z) / (fs2 - z) for z in s_zeros]
    z_zeros += [-1.0 + 0.0j] * (len(s_poles) - len(s_zeros))
    return z_poles, z_zeros


def _pair_conjugates(roots: list[complex]) -> list[tuple[complex, ...]]:
    """Group roots into conjugate pairs (plus lone reals) deterministically."""
    rem = sorted(roots, key=lambda r: (round(r.real, 12), round(abs(r.imag), 12)))
    pairs = []
    used = [False] * len(rem)
    for i, r in enumerate(rem):
        if used[i]:
            continue
        used[i] = True
        if abs(r.imag) < 1e-12:
            partner = None
            for j in range(i + 1, len(rem)):
                if not used[j] and abs(rem[j].imag) < 1e-12:
                    partner = j
                    break
            if partner is None:
                pairs.append((r,))
            else:
                used[partner] = True
                pairs.append((r, rem[partner]))
        else:
            for j in range(i + 1, len(rem)):
                if not used[j] and abs(rem[j] - r.conjugate()) < 1e-9:
                    used[j] = True
                    pairs.append((r, rem[j]))
                    break
            else:
                raise FilterDesignError("unpaired complex root in cascade assembly")
    return pairs


def _poly(pair: tuple[complex, ...]) -> tuple[float, float]:
    """(1 - r z^-1)(1 - r* z^-1) -> (c1, c2) so the section is 1 + c1 z^-1 + c2 z^-2."""
    if len(pair) == 1:
        return (-pair[0].real, 0.0)
    s = pair[0] + pair[1]
    p = pair[0] * pair[1]
    return (-s.real, p.real)


def _assemble(z_poles, z_zeros, fs: float, ref_freq: float) -> BiquadCascade:
    pole_pairs = sorted(_pair_conjugates(z_poles), key=len, reverse=True)
    zero_pairs = sorted(_pair_conjugates(z_zeros), key=len, reverse=True)
    if len(zero_pairs) != len(pole_pairs):
        raise FilterDesignError("zero/pole section count mismatch")
    rows = []
    for zp, pp in zip(zero_pairs, pole_pairs):
        b1, b2 = _poly(zp)
        a1, a2 = _poly(pp)
        if len(zp) == 1 and len(pp) == 2:
            raise FilterDesignError("first-order zero against second-order pole")
        rows.append([1.0, b1, b2, a1, a2])
    sos = np.asarray(rows, dtype=np.float64)
    cascade = BiquadCascade(sos=sos, fs=fs)
    for pair in pole_pairs:
        for p in pair:
            if abs(p) >= 1.0:
                raise FilterDesignError(f"unstable pole |p|={abs(p):.6f}")
    ref = abs(cascade.response(ref_freq)[0])
    if ref == 0.0 or not math.isfinite(ref):
        raise FilterDesignError("degenerate gain at reference frequency")
    scale = (1.0 / ref) ** (1.0 / len(rows))
    sos[:, :3] *= scale
    return BiquadCascade(sos=sos, fs=fs)


def design_butterworth(kind: str, order: int, edges, fs: float) -> BiquadCascade:
    """Design a Butterworth filter at sample rate ``fs``.

    kind   one of lowpass, highpass, bandpass, bandstop
    edges  cutoff in Hz (scalar) or (low, high) for band kinds
    """
    if order < 1:
        raise FilterDesignError(f"order must be >= 1, got {order}")
    nyq = fs / 2.0
    proto = _prototype_poles(order)

    if kind in ("lowpass", "highpass"):
        f = float(edges if np.isscalar(edges) else edges[0])
        if not 0 < f < nyq:
            raise FilterDesignError(f"{kind} edge {f} Hz outside (0, {nyq}) at fs={fs}")
        wc = _prewarp(f, fs)
        if kind == "lowpass":
            s_poles = [wc * p for p in proto]
            s_zeros: list[complex] = []
            ref = 0.0
        else:
            s_poles = [wc / p for p in proto]
            s_zeros = [0.0 + 0.0j] * order
            ref = nyq * (1.0 - 1e-9)
        z_poles, z_zeros = _bilinear(s_poles, s_zeros, fs)
        return _assemble(z_poles, z_zeros, fs, ref)

    if kind in ("bandpass", "bandstop"):
        lo, hi = float(edges[0]), float(edges[1])
        if not 0 < lo < hi < nyq:
            raise FilterDesignError(f"{kind} edges ({lo}, {hi}) invalid for fs={fs}")
        w1, w2 = _prewarp(lo, fs), _prewarp(hi, fs)
        bw, w0sq = w2 - w1, w1 * w2
        s_poles, s_zeros = [], []
        if kind == "bandpass":
            for p in proto:
                half = 0.5 * bw * p
                disc = cmath.sqrt(half * half - w0sq)
                s_poles += [half + disc, half - disc]
            s_zeros = [0.0 + 0.0j] * order
            center = fs / math.pi * math.atan(math.sqrt(w0sq) / (2 * fs))
            ref = center
        else:
            w0 = math.sqrt(w0sq)
            for p in proto:
                half = 0.5 * bw / p
                disc = cmath.sqrt(half * half - w0sq)
                s_poles += [half + disc, half - disc]
                s_zeros += [1j * w0, -1j * w0]
            ref = 0.0
        z_poles, z_zeros = _bilinear(s_poles, s_zeros, fs)
        return _assemble(z_poles, z_zeros, fs, ref)

    raise FilterDesignError(f"unknown filter kind {kind!r}")
