"""Bandwidth rules: the fixed rate ``n^{1/(2q+1)}`` and a plug-in estimate
of the constant in front of it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .autocov import GramStatistics
from .errors import DegenerateSampleError, FwnError, InsufficientDataError, InvalidBandwidthError
from .kernels import constants, get_kernel, support_lag
from .spectral import parseval_integrals

__all__ = [
    "BandwidthResult",
    "adaptive_bandwidth",
    "fixed_bandwidth",
    "resolve_bandwidth",
    "P_MIN",
]

P_MIN = 2.0
# upper clamp is n * P_MAX_FRACTION
P_MAX_FRACTION = 0.25
PILOT_DERIVATIVE_FACTOR = 4.0


@dataclass(frozen=True)
class BandwidthResult:
    p_hat: float
    c_hat: float
    q: int
    pilot_p0: float
    pilot_pq: float
    integrals: tuple[float, float, float]
    p_min: float
    p_max: float

    def to_record(self) -> dict:
        i_f, i_fq, i_tr = self.integrals
        return {
            "p_hat": self.p_hat,
            "c_hat": self.c_hat,
            "q": self.q,
            "pilot_p0": self.pilot_p0,
            "pilot_pq": self.pilot_pq,
            "I_F": i_f,
            "I_Fq": i_fq,
            "I_tr": i_tr,
            "p_min": self.p_min,
            "p_max": self.p_max,
        }


def _rate(q: int, n: int) -> float:
    # cbrt keeps perfect cubes exact (1000 -> 10.0)
    return float(np.cbrt(n)) if q == 1 else n ** (1.0 / (2 * q + 1))


def fixed_bandwidth(kernel, n: int) -> float:
    """``n^{1/(2q+1)}``; the truncated kernel uses ``n^{1/3}``."""
    if n < 2:
        raise InsufficientDataError(f"need n >= 2, got {n}")
    q = get_kernel(kernel).order_q or 1
    return _rate(q, n)


def adaptive_bandwidth(sample, kernel, trace_mode: str = "modulus") -> BandwidthResult:
    """Plug-in bandwidth ``c_q n^{1/(2q+1)}`` with

    ``c_q^{2q+1} = 2 q xi^2 I_Fq / (int k^2 (I_F + I_tr))``.

    Pilot estimates use the same kernel with bandwidths ``n^{1/(2q+1)}``
    (``I_F``, ``I_tr``) and ``4 n^{1/(2q+1)}`` (``I_Fq``).  The result is
    clamped to ``[2, n/4]``.
    """
    k = get_kernel(kernel)
    q, xi, int_k2, _ = constants(k)
    stats = GramStatistics.of(sample)
    n = stats.n
    if n < 10:
        raise InsufficientDataError(f"adaptive bandwidth needs n >= 10, got {n}")
    rate = _rate(q, n)
    p0 = rate
    pq = PILOT_DERIVATIVE_FACTOR * rate
    j_max = max(support_lag(k, n, p0), support_lag(k, n, pq))
    lag = stats.lag_norms(j_max)
    tr = stats.trace_lags(j_max)
    i_f, i_fq, i_tr = parseval_integrals(lag, tr, k, p0, q, p_q=pq, trace_mode=trace_mode)
    denom = int_k2 * (i_f + i_tr)
    if denom <= 0.0:
        raise DegenerateSampleError("pilot spectral integrals vanish")
    c_pow = 2.0 * q * xi**2 * i_fq / denom
    c_hat = c_pow ** (1.0 / (2 * q + 1))
    p_max = P_MAX_FRACTION * n
    p_hat = min(max(c_hat * rate, P_MIN), p_max)
    return BandwidthResult(
        float(p_hat), float(c_hat), q, float(p0), float(pq),
        (i_f, i_fq, i_tr), P_MIN, float(p_max),
    )


def resolve_bandwidth(sample, kernel, rule) -> float:
    """Turn ``"adaptive"``, ``"fixed"`` or a number into a bandwidth."""
    if isinstance(rule, str):
        key = rule.strip().lower()
        if key == "adaptive":
            return adaptive_bandwidth(sample, kernel).p_hat
        if key == "fixed":
            return fixed_bandwidth(kernel, GramStatistics.of(sample).n)
        try:
            rule = float(key)
        except ValueError:
            raise FwnError(
                f"bandwidth must be 'adaptive', 'fixed' or a number, got {rule!r}"
            ) from None
    p = float(rule)
    if not (p > 0 and math.isfinite(p)):
        raise InvalidBandwidthError(f"bandwidth must be positive, got {rule}")
    return p
