"""Lag-window spectral density operator estimate and its integrated norms.

The test and the bandwidth rule only need frequency integrals of the
estimate, and by orthonormality of ``exp(-i j w)`` on ``[-pi, pi]`` those
reduce to weighted sums of lag statistics.  :func:`sdo_eval` builds the
discretised operator at a single frequency for diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .autocov import GramStatistics, LagNorms
from .errors import CoverageError, DegenerateSampleError, FwnError
from .fspace import FunctionalSample
from .kernels import KernelSpec, get_kernel, support_lag, weights

__all__ = [
    "SpectralEstimate",
    "lag_operator",
    "sdo_eval",
    "q_hat_sq",
    "parseval_integrals",
    "consistency_constant",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpectralEstimate:
    """Discretised ``F_n(omega)``: ``matrix[a, b]`` is its integral kernel at
    grid points ``(t_a, t_b)``."""

    omega: float
    matrix: np.ndarray
    weights: np.ndarray
    kernel: KernelSpec
    bandwidth: float

    def hs_norm_sq(self) -> float:
        w = self.weights
        return float(np.sum(np.outer(w, w) * np.abs(self.matrix) ** 2))

    def trace(self) -> complex:
        return complex(np.sum(self.weights * np.diag(self.matrix)))


def lag_operator(sample: FunctionalSample, j: int) -> np.ndarray:
    """Integral kernel of ``C_n(j)``; negative ``j`` gives the adjoint."""
    x = sample.values
    n = sample.n
    if abs(j) >= n:
        raise FwnError(f"lag {j} out of range for n={n}")
    if j >= 0:
        return x[j:].T @ x[: n - j] / n
    return lag_operator(sample, -j).T


def sdo_eval(sample: FunctionalSample, kernel, p: float, omega: float) -> SpectralEstimate:
    """``(2 pi)^{-1} sum_{|j|<n} k(j/p) C_n(j) exp(-i j omega)``."""
    if not -math.pi <= omega <= math.pi:
        raise FwnError(f"omega must lie in [-pi, pi], got {omega}")
    k = get_kernel(kernel)
    n = sample.n
    kw = weights(k, n, p)
    mat = lag_operator(sample, 0).astype(complex)
    for j in range(1, support_lag(k, n, p) + 1):
        if kw[j] == 0.0:
            continue
        c = lag_operator(sample, j)
        e = np.exp(-1j * j * omega)
        mat += kw[j] * (c * e + c.T * np.conj(e))
    return SpectralEstimate(omega, mat / TWO_PI, sample.grid.weights, k, float(p))


def _covered_weights(lagnorms: LagNorms, kernel, p: float) -> np.ndarray:
    """``k(j/p)`` for ``j = 0..J`` where ``J`` is the last lag with weight."""
    need = support_lag(kernel, lagnorms.n, p)
    if lagnorms.j_max < need:
        raise CoverageError(
            f"kernel {get_kernel(kernel).id!r} with bandwidth {p:g} needs lags up "
            f"to {need}, only {lagnorms.j_max} available"
        )
    return weights(kernel, need + 1, p)


def q_hat_sq(lagnorms: LagNorms, kernel, p: float) -> float:
    """``Q_n^2 = 2 sum_{j>=1} k^2(j/p) ||C_n(j)||_2^2``."""
    kw = _covered_weights(lagnorms, kernel, p)
    return 2.0 * float(np.sum(kw[1:] ** 2 * lagnorms.values[1 : kw.size]))


def parseval_integrals(
    lagnorms: LagNorms,
    trace_lags,
    kernel,
    p: float,
    q: int,
    p_q: float | None = None,
    trace_mode: str = "modulus",
) -> tuple[float, float, float]:
    """Frequency integrals used by the plug-in bandwidth rule.

    Returns
    -------
    I_F : float
        Integral over ``[-pi, pi]`` of ``||F(w)||_2^2`` (bandwidth ``p``).
    I_Fq : float
        Same for the generalised ``q``-th derivative estimate, whose lag
        weights carry an extra ``|j|^q`` (bandwidth ``p_q``, default ``p``).
    I_tr : float
        Integral of ``|tr F(w)|^2`` (bandwidth ``p``).  With
        ``trace_mode="operator"`` the integrand is ``tr(F(w)^2)`` instead,
        which integrates to ``I_F``.
    """
    if q < 1:
        raise FwnError("q must be >= 1")
    if trace_mode not in ("modulus", "operator"):
        raise FwnError(f"unknown trace_mode {trace_mode!r}")
    if p_q is None:
        p_q = p
    hs = lagnorms.values
    kw = _covered_weights(lagnorms, kernel, p)
    k2 = kw**2
    i_f = (k2[0] * hs[0] + 2.0 * np.sum(k2[1:] * hs[1 : kw.size])) / TWO_PI

    kq = _covered_weights(lagnorms, kernel, p_q)
    j = np.arange(kq.size, dtype=float)
    i_fq = 2.0 * np.sum(j[1:] ** (2 * q) * kq[1:] ** 2 * hs[1 : kq.size]) / TWO_PI

    if trace_mode == "operator":
        i_tr = i_f
    else:
        tr = np.asarray(trace_lags, dtype=float)
        if tr.size < kw.size:
            raise CoverageError(
                f"trace lags cover {tr.size - 1} lags, {kw.size - 1} needed"
            )
        i_tr = (k2[0] * tr[0] ** 2 + 2.0 * np.sum(k2[1:] * tr[1 : kw.size] ** 2)) / TWO_PI
    return float(i_f), float(i_fq), float(i_tr)


def consistency_constant(sample, kernel, p: float) -> float:
    """Plug-in limit of ``(p^{1/2}/n) T_n``: ``Q^2 / (2 ||C(0)||^2 sqrt(2 D(k)))``."""
    stats = GramStatistics.of(sample)
    k = get_kernel(kernel)
    cov0 = stats.cov0
    if cov0 == 0.0:
        raise DegenerateSampleError("sample is identically zero")
    qsq = q_hat_sq(stats.lag_norms(support_lag(k, stats.n, p)), k, p)
    return 0.5 * qsq / (cov0 * math.sqrt(2.0 * k.d_k))
