"""Lag-window kernels, their constants and the finite-sample weight sums.

Four kernels are available by id: ``bartlett``, ``parzen``, ``daniell`` and
``truncated``.  Each carries its characteristic exponent ``q`` and constant
``xi`` (``1 - k(x) ~ xi |x|^q`` near 0), ``int_k2`` (integral of ``k^2``
over the real line) and ``d_k`` (integral of ``k^4`` over ``[0, inf)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidBandwidthError, UnsupportedKernelError

__all__ = [
    "KernelSpec",
    "KERNELS",
    "get_kernel",
    "evaluate",
    "constants",
    "weights",
    "support_lag",
    "cn",
    "dn",
]

# 3-term Taylor branch of sin(pi x)/(pi x) below this |pi x|
_SINC_TAYLOR_CUTOFF = 1e-4


def _bartlett(x):
    ax = np.abs(x)
    return np.where(ax <= 1.0, 1.0 - ax, 0.0)


def _parzen(x):
    ax = np.abs(x)
    inner = 1.0 - 6.0 * ax**2 + 6.0 * ax**3
    outer = 2.0 * (1.0 - ax) ** 3
    return np.where(ax <= 0.5, inner, np.where(ax <= 1.0, outer, 0.0))


def _daniell(x):
    z = np.pi * np.asarray(x, dtype=float)
    small = np.abs(z) < _SINC_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, z)
    z2 = z * z
    return np.where(small, 1.0 - z2 / 6.0 + z2 * z2 / 120.0, np.sin(safe) / safe)


def _truncated(x):
    return np.where(np.abs(x) <= 1.0, 1.0, 0.0)


@dataclass(frozen=True)
class KernelSpec:
    id: str
    order_q: int | None
    xi: float | None
    int_k2: float
    d_k: float
    compact: bool
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return self.id


KERNELS: dict[str, KernelSpec] = {
    "bartlett": KernelSpec("bartlett", 1, 1.0, 2.0 / 3.0, 1.0 / 5.0, True, _bartlett),
    "parzen": KernelSpec(
        "parzen", 2, 6.0, 151.0 / 280.0, 122559.0 / 640640.0, True, _parzen
    ),
    "daniell": KernelSpec(
        "daniell", 2, math.pi**2 / 6.0, 1.0, 1.0 / 3.0, False, _daniell
    ),
    "truncated": KernelSpec("truncated", None, None, 2.0, 1.0, True, _truncated),
}


def get_kernel(kernel) -> KernelSpec:
    """Resolve a kernel id (or pass a :class:`KernelSpec` through)."""
    if isinstance(kernel, KernelSpec):
        return kernel
    try:
        return KERNELS[str(kernel).lower()]
    except KeyError:
        raise UnsupportedKernelError(
            f"unknown kernel {kernel!r}; choose one of {', '.join(KERNELS)}"
        ) from None


def evaluate(kernel, x):
    """Evaluate ``k(x)``; scalars in, float out; arrays in, arrays out."""
    k = get_kernel(kernel)
    out = k.func(np.asarray(x, dtype=float))
    if np.ndim(out) == 0:
        return float(out)
    return out


def constants(kernel) -> tuple[int, float, float, float]:
    """Return ``(q, xi, int_k2, d_k)``.

    The truncated kernel has no finite positive ``xi`` for any ``q`` and is
    rejected here since these constants only feed bandwidth selection.
    """
    k = get_kernel(kernel)
    if k.order_q is None:
        raise UnsupportedKernelError(
            f"kernel {k.id!r} has no characteristic exponent; "
            "it cannot be used for adaptive bandwidth selection"
        )
    return k.order_q, k.xi, k.int_k2, k.d_k


def support_lag(kernel, n: int, p: float) -> int:
    """Largest lag ``j < n`` with a possibly nonzero weight ``k(j/p)``."""
    k = get_kernel(kernel)
    if not k.compact:
        return n - 1
    return int(min(n - 1, math.floor(p)))


def weights(kernel, n: int, p: float) -> np.ndarray:
    """``k(j/p)`` for ``j = 0, ..., n-1``."""
    if not p > 0:
        raise InvalidBandwidthError(f"bandwidth must be positive, got {p}")
    j = np.arange(n, dtype=float)
    return np.asarray(evaluate(kernel, j / p), dtype=float)


def cn(kernel, n: int, p: float) -> float:
    """``C_n(k) = sum_{j=1}^{n-1} (1 - j/n) k^2(j/p)``."""
    w = weights(kernel, n, p)[1:]
    j = np.arange(1, n)
    return float(np.sum((1.0 - j / n) * w**2))


def dn(kernel, n: int, p: float) -> float:
    """``D_n(k) = sum_{j=1}^{n-2} (1 - j/n)(1 - (j+1)/n) k^4(j/p)``."""
    w = weights(kernel, n, p)[1 : n - 1]
    j = np.arange(1, n - 1)
    return float(np.sum((1.0 - j / n) * (1.0 - (j + 1) / n) * w**4))
