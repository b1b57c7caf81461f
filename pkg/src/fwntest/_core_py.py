"""NumPy kernels: the lag-sum fallbacks for ``_core.pyx`` plus the BLAS-backed
Gram matrix and cubic trace used by every backend."""

import numpy as np


def gram(x, w):
    g = (x * w) @ x.T
    return np.triu(g) + np.triu(g, 1).T


def lag_sums(g, jmax):
    n = g.shape[0]
    out = np.empty(jmax + 1)
    for j in range(jmax + 1):
        out[j] = np.sum(g[j:, j:] * g[: n - j, : n - j])
    return out


def trace_sums(g, jmax):
    return np.array([np.trace(g, offset=-j) for j in range(jmax + 1)], dtype=float)


def trace_cube(g):
    return float(np.sum(g * (g @ g)))
