"""White noise test statistics for functional time series.

``T_n`` centres and scales the lag-window distance ``Q_n^2`` so that it is
asymptotically standard normal for iid curves.  Its finite-sample law is
right skewed; the power transform ``T_n^beta`` re-expresses the normalised
distance with an exponent chosen to cancel the leading skewness term.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import norm

from .autocov import GramStatistics
from .errors import (
    DegenerateSampleError,
    DegenerateWeightsError,
    FwnError,
    InvalidBandwidthError,
    InsufficientDataError,
    InvalidExponentError,
)
from .kernels import cn, dn, get_kernel, support_lag, weights
from .spectral import q_hat_sq

__all__ = [
    "TestResult",
    "t_stat",
    "t_stat_beta",
    "beta_one_star",
    "beta_hat_star",
    "white_noise_test",
    "VARIANTS",
    "BETA_MODES",
]

VARIANTS = ("raw", "beta1", "betahat")
BETA_MODES = ("consistent", "literal")


@dataclass(frozen=True)
class TestResult:
    statistic: float
    variant: str
    beta: float | None
    p_value: float
    kernel: str
    bandwidth: float
    n: int
    q_hat_sq: float
    sigma2_hat: float
    cov0_hs_sq: float
    cn: float
    dn: float

    __test__ = False  # not a pytest class

    def to_record(self) -> dict:
        return asdict(self)

    def recombine(self) -> float:
        """Rebuild the statistic from the stored intermediates."""
        if self.beta is None:
            return _raw_statistic(
                self.n, self.q_hat_sq, self.sigma2_hat, self.cov0_hs_sq, self.cn, self.dn
            )
        return _beta_statistic(
            self.n, self.q_hat_sq, self.sigma2_hat, self.cov0_hs_sq, self.cn, self.dn,
            self.beta,
        )


def _raw_statistic(n, qsq, sigma2, cov0, c_n, d_n):
    return (0.5 * n * qsq - sigma2**2 * c_n) / (cov0 * math.sqrt(2.0 * d_n))


def _beta_statistic(n, qsq, sigma2, cov0, c_n, d_n, beta):
    base = 0.5 * n * qsq / sigma2**2
    if base <= 0.0:
        raise DegenerateSampleError(
            "normalised distance is zero; its power is undefined"
        )
    ratio = cov0 / sigma2**2
    centre = c_n**beta + 0.5 * beta * (beta - 1.0) * c_n ** (beta - 2.0) * ratio**2 * 2.0 * d_n
    scale = beta * c_n ** (beta - 1.0) * ratio * math.sqrt(2.0 * d_n)
    return (base**beta - centre) / scale


def _ingredients(sample, kernel, p):
    if not p > 0:
        raise InvalidBandwidthError(f"bandwidth must be positive, got {p}")
    stats = GramStatistics.of(sample)
    n = stats.n
    if n < 3:
        raise InsufficientDataError(f"at least 3 curves are needed, got {n}")
    k = get_kernel(kernel)
    cov0 = stats.cov0
    if cov0 == 0.0:
        raise DegenerateSampleError("sample is identically zero")
    c_n = cn(k, n, p)
    d_n = dn(k, n, p)
    if d_n == 0.0:
        raise DegenerateWeightsError(
            f"all kernel weights vanish for bandwidth {p:g}; increase the bandwidth"
        )
    qsq = q_hat_sq(stats.lag_norms(support_lag(k, n, p)), k, p)
    return stats, k, n, qsq, stats.sigma2, cov0, c_n, d_n


def t_stat(sample, kernel, p: float) -> TestResult:
    """Standardised lag-window distance ``T_n``.

    Parameters
    ----------
    sample : FunctionalSample or GramStatistics
    kernel : str or KernelSpec
    p : float
        Bandwidth (need not be an integer).
    """
    _, k, n, qsq, s2, cov0, c_n, d_n = _ingredients(sample, kernel, p)
    stat = _raw_statistic(n, qsq, s2, cov0, c_n, d_n)
    return TestResult(
        float(stat), "raw", None, float(norm.sf(stat)), k.id, float(p), n,
        qsq, s2, cov0, c_n, d_n,
    )


def t_stat_beta(sample, kernel, p: float, beta: float, variant: str = "beta") -> TestResult:
    """Power-transformed statistic ``T_n^beta`` for a given exponent."""
    if beta == 0 or not math.isfinite(beta):
        raise InvalidExponentError(f"beta must be finite and nonzero, got {beta}")
    _, k, n, qsq, s2, cov0, c_n, d_n = _ingredients(sample, kernel, p)
    stat = _beta_statistic(n, qsq, s2, cov0, c_n, d_n, beta)
    return TestResult(
        float(stat), variant, float(beta), float(norm.sf(stat)), k.id, float(p), n,
        qsq, s2, cov0, c_n, d_n,
    )


def _skew_factor(kernel, n, p):
    w = weights(kernel, n, p)[1:]
    s2 = np.sum(w**2)
    s4 = np.sum(w**4)
    s6 = np.sum(w**6)
    if s4 == 0.0:
        raise DegenerateWeightsError(
            f"all kernel weights vanish for n={n}, bandwidth {p:g}"
        )
    return float(s2 * s6 / s4**2)


def beta_one_star(kernel, n: int, p: float) -> float:
    """Skewness-cancelling exponent under the chi-square(1) moment ratio 2/3."""
    return 1.0 - (2.0 / 3.0) * _skew_factor(kernel, n, p)


def beta_hat_star(sample, kernel, p: float, mode: str = "consistent") -> float:
    """Data-driven skewness-cancelling exponent.

    The cumulant ratio ``mu1' mu3 / (3 mu2^2)`` is estimated from the trace
    moments of the lag-0 covariance.  ``mode="consistent"`` uses
    ``(2/3) (m1 m3 / m2^2)^2``, which is 2/3 on scalar data;
    ``mode="literal"`` plugs the trace moments in directly,
    ``m1 m3 / (3 m2^2)``.
    """
    if mode not in BETA_MODES:
        raise FwnError(f"unknown beta mode {mode!r}; choose one of {BETA_MODES}")
    stats = GramStatistics.of(sample)
    mom = stats.moments
    if mom.mu2 == 0.0:
        raise DegenerateSampleError("sample is identically zero")
    if mode == "consistent":
        r = (2.0 / 3.0) * mom.ratio**2
    else:
        r = mom.ratio / 3.0
    return 1.0 - r * _skew_factor(kernel, stats.n, p)


def white_noise_test(
    sample,
    kernel="bartlett",
    bandwidth="adaptive",
    variant: str = "beta1",
    beta_mode: str = "consistent",
) -> TestResult:
    """Run the test end to end.

    ``bandwidth`` is ``"adaptive"``, ``"fixed"`` or a positive number.
    ``variant`` is ``"raw"`` (``T_n``), ``"beta1"`` or ``"betahat"``.
    """
    from .bandwidth import resolve_bandwidth

    stats = GramStatistics.of(sample)
    p = resolve_bandwidth(stats, kernel, bandwidth)
    if variant == "raw":
        return t_stat(stats, kernel, p)
    if variant == "beta1":
        beta = beta_one_star(kernel, stats.n, p)
    elif variant == "betahat":
        beta = beta_hat_star(stats, kernel, p, mode=beta_mode)
    else:
        raise FwnError(f"unknown variant {variant!r}; choose one of {VARIANTS}")
    return t_stat_beta(stats, kernel, p, beta, variant=variant)
