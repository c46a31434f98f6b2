# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled biquad-cascade kernel (direct form II transposed).

This is the hot inner loop of the preprocessing chain: a sequential
per-sample recurrence that numpy cannot vectorize over time.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sosfilt(cnp.float64_t[:, ::1] sos, cnp.float64_t[:, ::1] x):
    """Filter each row of ``x`` (channels x time) through the cascade in place.

    ``sos`` rows are (b0, b1, b2, a1, a2); state starts at zero per channel.
    """
    cdef Py_ssize_t n_sec = sos.shape[0]
    cdef Py_ssize_t n_ch = x.shape[0]
    cdef Py_ssize_t n_t = x.shape[1]
    cdef Py_ssize_t s, c, t
    cdef double b0, b1, b2, a1, a2, z1, z2, xi, yi

    with nogil:
        for c in range(n_ch):
            for s in range(n_sec):
                b0 = sos[s, 0]
                b1 = sos[s, 1]
                b2 = sos[s, 2]
                a1 = sos[s, 3]
                a2 = sos[s, 4]
                z1 = 0.0
                z2 = 0.0
                for t in range(n_t):
                    xi = x[c, t]
                    yi = b0 * xi + z1
                    z1 = b1 * xi - a1 * yi + z2
                    z2 = b2 * xi - a2 * yi
                    x[c, t] = yi
    return np.asarray(x)
