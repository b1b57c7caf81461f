"""Empirical autocovariance operators, evaluated through the Gram matrix.

``C_n(j) = n^{-1} sum_{t>j} u_t (x) u_{t-j}`` is never formed.  Its squared
Hilbert-Schmidt norm follows from ``<a(x)b, c(x)d>_HS = <a,c><b,d>``::

    ||C_n(j)||^2 = n^{-2} sum_{s,t>j} G[t,s] G[t-j,s-j]

so the cost per lag is O(n^2) regardless of the grid size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import LagRangeError

__all__ = [
    "LagNorms",
    "MomentEstimates",
    "lag_norms",
    "trace_lags",
    "cov0_hs_norm_sq",
    "moment_estimates",
    "GramStatistics",
]


@dataclass(frozen=True)
class LagNorms:
    """``values[j] = ||C_n(j)||_2^2`` for ``j = 0..j_max``."""

    values: np.ndarray
    n: int

    @property
    def j_max(self) -> int:
        return self.values.size - 1

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class MomentEstimates:
    mu1: float
    mu2: float
    mu3: float

    @property
    def sigma2(self) -> float:
        return self.mu1

    @property
    def ratio(self) -> float:
        """``mu1 * mu3 / mu2**2``; equals 1 for rank-one Gram matrices."""
        return self.mu1 * self.mu3 / self.mu2**2


def _check_lag(n, j_max):
    if j_max is None:
        return n - 1
    j_max = int(j_max)
    if j_max < 0 or j_max >= n:
        raise LagRangeError(f"maximum lag must lie in [0, {n - 1}], got {j_max}")
    return j_max


def lag_norms(G, j_max: int | None = None) -> LagNorms:
    """Squared HS norms of the lag-j autocovariance operators.

    Parameters
    ----------
    G : ndarray, shape (n, n)
        Gram matrix of the sample.
    j_max : int, optional
        Largest lag to evaluate; defaults to ``n - 1``.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    j_max = _check_lag(n, j_max)
    vals = _backend.lag_sums(G, j_max) / n**2
    vals.flags.writeable = False
    return LagNorms(vals, n)


def trace_lags(G, j_max: int | None = None) -> np.ndarray:
    """``trace C_n(j) = n^{-1} sum_{t>j} <u_t, u_{t-j}>`` for ``j = 0..j_max``."""
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    j_max = _check_lag(n, j_max)
    return _backend.trace_sums(G, j_max) / n


def cov0_hs_norm_sq(G) -> float:
    """``||C_n(0)||_2^2 = n^{-2} sum_{s,t} G[s,t]^2``."""
    G = np.asarray(G, dtype=float)
    return float(np.sum(G * G)) / G.shape[0] ** 2


def moment_estimates(G) -> MomentEstimates:
    """Plug-in trace moments of the lag-0 covariance operator.

    ``mu1 = tr(G)/n``, ``mu2 = sum(G**2)/n**2`` and ``mu3 = tr(G**3)/n**3``.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    mu1 = float(np.trace(G)) / n
    mu2 = cov0_hs_norm_sq(G)
    mu3 = _backend.trace_cube(G) / n**3
    return MomentEstimates(mu1, mu2, mu3)


class GramStatistics:
    """Per-sample cache of the Gram matrix and the lag sums derived from it.

    One instance is shared by every statistic computed on a sample, so the
    Gram matrix and each lag sum are evaluated once.  Each lag is computed
    independently, so extending the cache never changes earlier entries.
    """

    def __init__(self, G):
        G = np.asarray(G, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValueError("Gram matrix must be square")
        self.G = G
        self.n = G.shape[0]
        self._hs = np.empty(0)
        self._tr = np.empty(0)
        self._moments = None

    @classmethod
    def of(cls, sample) -> "GramStatistics":
        if isinstance(sample, cls):
            return sample
        from .fspace import gram

        return cls(gram(sample))

    def lag_norms(self, j_max: int | None = None) -> LagNorms:
        j_max = _check_lag(self.n, j_max)
        have = self._hs.size
        if have <= j_max:
            self._hs = _backend.lag_sums(self.G, j_max) / self.n**2
        vals = self._hs[: j_max + 1].copy()
        vals.flags.writeable = False
        return LagNorms(vals, self.n)

    def trace_lags(self, j_max: int | None = None) -> np.ndarray:
        j_max = _check_lag(self.n, j_max)
        if self._tr.size <= j_max:
            self._tr = _backend.trace_sums(self.G, j_max) / self.n
        return self._tr[: j_max + 1].copy()

    @property
    def moments(self) -> MomentEstimates:
        if self._moments is None:
            self._moments = moment_estimates(self.G)
        return self._moments

    @property
    def sigma2(self) -> float:
        return float(np.trace(self.G)) / self.n

    @property
    def cov0(self) -> float:
        return cov0_hs_norm_sq(self.G)
