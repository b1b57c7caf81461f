# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lag-sum kernels.  Loop order is fixed so results are reproducible.

The Gram matrix and trace(G^3) are matrix products and stay on BLAS.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def lag_sums(const double[:, ::1] g, Py_ssize_t jmax):
    """``out[j] = sum_{s,t >= j} g[t,s] g[t-j,s-j]`` for ``j = 0..jmax``."""
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t j, s, t
    cdef double diag, off
    out = np.zeros(jmax + 1, dtype=np.float64)
    cdef double[::1] o = out
    for j in range(jmax + 1):
        diag = 0.0
        off = 0.0
        for t in range(j, n):
            diag += g[t, t] * g[t - j, t - j]
            for s in range(j, t):
                off += g[t, s] * g[t - j, s - j]
        o[j] = diag + 2.0 * off
    return out


def trace_sums(const double[:, ::1] g, Py_ssize_t jmax):
    """``out[j] = sum_{t >= j} g[t, t-j]``."""
    cdef Py_ssize_t n = g.shape[0]
    cdef Py_ssize_t j, t
    cdef double acc
    out = np.zeros(jmax + 1, dtype=np.float64)
    cdef double[::1] o = out
    for j in range(jmax + 1):
        acc = 0.0
        for t in range(j, n):
            acc += g[t, t - j]
        o[j] = acc
    return out

