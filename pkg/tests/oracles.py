"""Independent reference computations used by the tests.

Nothing here goes through the Gram matrix or the lag-domain formulas: the
autocovariance operators are materialised as m x m kernel matrices and the
frequency integrals are done by quadrature over omega.
"""

import math

import numpy as np

from fwntest import FunctionalSample, Grid


def explicit_lag_operator(x, j):
    """Kernel matrix K[a, b] = n^{-1} sum_{t>j} u_t(a) u_{t-j}(b), by loops."""
    n, m = x.shape
    K = np.zeros((m, m))
    for t in range(j, n):
        K += np.outer(x[t], x[t - j])
    return K / n


def weighted_hs_sq(K, w):
    return float(np.sum(np.outer(w, w) * np.abs(K) ** 2))


def weighted_trace(K, w):
    return np.sum(w * np.diag(K))


def spectral_operator(x, w, kfun, p, omega):
    n = x.shape[0]
    out = explicit_lag_operator(x, 0).astype(complex)
    for j in range(1, n):
        kj = kfun(j / p)
        if kj == 0:
            continue
        C = explicit_lag_operator(x, j)
        out += kj * (C * np.exp(-1j * j * omega) + C.T * np.exp(1j * j * omega))
    return out / (2 * math.pi)


def frequency_integrals(x, w, kfun, p, n_omega=2048):
    """Integrals over [-pi, pi] of ||F||^2, ||F - C(0)/2pi||^2 and |tr F|^2
    by the periodic rectangle rule."""
    n = x.shape[0]
    lags = [explicit_lag_operator(x, j) for j in range(n)]
    kw = [kfun(j / p) for j in range(n)]
    omegas = -math.pi + 2 * math.pi * np.arange(n_omega) / n_omega
    h = 2 * math.pi / n_omega
    i_f = i_dev = i_tr = 0.0
    c0 = lags[0] / (2 * math.pi)
    for om in omegas:
        F = lags[0].astype(complex)
        for j in range(1, n):
            if kw[j] == 0:
                continue
            e = np.exp(-1j * j * om)
            F = F + kw[j] * (lags[j] * e + lags[j].T * np.conj(e))
        F /= 2 * math.pi
        i_f += weighted_hs_sq(F, w) * h
        i_dev += weighted_hs_sq(F - c0, w) * h
        i_tr += abs(weighted_trace(F, w)) ** 2 * h
    return i_f, i_dev, i_tr


def scalar_autocov(x, j):
    n = len(x)
    return sum(x[t] * x[t - j] for t in range(j, n)) / n


def random_sample(rng, n, m, uniform=True):
    x = rng.standard_normal((n, m))
    if uniform:
        return FunctionalSample(x)
    pts = np.sort(rng.uniform(0.01, 1.0, m))
    while np.any(np.diff(pts) <= 0):
        pts = np.sort(rng.uniform(0.01, 1.0, m))
    return FunctionalSample(x, Grid(pts, rng.uniform(0.1, 1.0, m)))
