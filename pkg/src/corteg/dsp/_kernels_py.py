"""Pure-python twin of the compiled biquad kernel.

Selected at import time when the extension is unavailable. Same contract and
bit-level arithmetic order as ``_kernels.sosfilt`` (direct form II transposed,
per channel, zero initial state), just slower.
"""

import numpy as np


def sosfilt(sos, x):
    """Filter each row of ``x`` (channels x time) through the cascade in place."""
    n_sec = sos.shape[0]
    n_ch = x.shape[0]
    for c in range(n_ch):
        row = x[c]
        for s in range(n_sec):
            b0, b1, b2, a1, a2 = sos[s]
            z1 = 0.0
            z2 = 0.0
            data = row.tolist()
            for t, xi in enumerate(data):
                yi = b0 * xi + z1
                z1 = b1 * xi - a1 * yi + z2
                z2 = b2 * xi - a2 * yi
                data[t] = yi
            row[:] = data
    return np.asarray(x)
