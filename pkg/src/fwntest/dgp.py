"""Simulators for iid Brownian motion, functional GARCH(1,1) and FAR(1) curves.

All curves live on the uniform grid ``t_i = i/m``.  Every simulator is a
pure function of its seed: the kept sample draws from one child stream of
the seed and the burn-in from another, so changing the burn-in length or
the dynamics never shifts the innovations of the kept curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import FwnError
from .fspace import FunctionalSample, Grid, GridCurve

__all__ = [
    "DGP_IDS",
    "DgpSpec",
    "RngStream",
    "simulate",
    "brownian_motion",
    "brownian_bridge",
    "ou_innovation",
    "ou_covariance",
    "far_constant",
]

DGP_IDS = ("iid_bm", "fgarch11", "far1")
DEFAULT_BURNIN = {"iid_bm": 0, "fgarch11": 30, "far1": 30}

# OU innovation covariance is 2^(-OU_RATE |s - t|)
OU_RATE = 200.0


class RngStream:
    """Reproducible stream of standard normal deviates.

    ``RngStream(seed, key)`` is a PCG64 generator keyed by the seed and the
    spawn key tuple; the sequence does not depend on platform or threads.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, *key: int) -> "RngStream":
        return RngStream(self.seed, self.key + tuple(key))

    def normal(self, size=None) -> np.ndarray:
        return self._gen.standard_normal(size)


@dataclass(frozen=True)
class DgpSpec:
    """Data generating process settings.

    ``garch_alpha`` and ``garch_beta`` scale the ``12 t(1-t) s(1-s)`` kernels
    of the GARCH operators (1 reproduces the standard design).
    """

    id: str
    n: int
    m: int = 100
    burnin: int | None = None
    far_S: float = 0.3
    seed: int = 0
    garch_delta: float = 0.01
    garch_alpha: float = 1.0
    garch_beta: float = 1.0

    def __post_init__(self):
        if self.id not in DGP_IDS:
            raise FwnError(f"unknown dgp {self.id!r}; choose one of {', '.join(DGP_IDS)}")
        if self.burnin is None:
            object.__setattr__(self, "burnin", DEFAULT_BURNIN[self.id])
        if self.n < 1:
            raise FwnError(f"n must be >= 1, got {self.n}")
        if self.m < 1:
            raise FwnError(f"m must be >= 1, got {self.m}")
        if self.burnin < 0:
            raise FwnError(f"burnin must be >= 0, got {self.burnin}")
        if self.id == "far1" and not 0.0 <= self.far_S < 1.0:
            raise FwnError(f"far_S must lie in [0, 1), got {self.far_S}")
        if self.seed < 0:
            raise FwnError("seed must be a nonnegative integer")
        if self.garch_delta <= 0:
            raise FwnError("garch_delta must be positive")
        if self.garch_alpha < 0 or self.garch_beta < 0:
            raise FwnError("GARCH operator scales must be nonnegative")

    def with_(self, **changes) -> "DgpSpec":
        return replace(self, **changes)


def _bm_paths(rng: RngStream, count: int, m: int) -> np.ndarray:
    return np.cumsum(rng.normal((count, m)) * math.sqrt(1.0 / m), axis=1)


def brownian_motion(m: int, rng: RngStream) -> GridCurve:
    """Standard Brownian motion at ``t_i = i/m`` from N(0, 1/m) increments."""
    return GridCurve(_bm_paths(rng, 1, m)[0], Grid.uniform(m))


def brownian_bridge(m: int, rng: RngStream) -> GridCurve:
    """``B(t) = W(t) - t W(1)``; ``B(1)`` is exactly 0."""
    w = _bm_paths(rng, 1, m)[0]
    t = Grid.uniform(m).points
    b = w - t * w[-1]
    b[-1] = 0.0
    return GridCurve(b, Grid.uniform(m))


def ou_covariance(m: int) -> np.ndarray:
    t = np.arange(1, m + 1) / m
    return np.exp2(-OU_RATE * np.abs(t[:, None] - t[None, :]))


@lru_cache(maxsize=16)
def _ou_factor(m: int) -> np.ndarray:
    cov = ou_covariance(m)
    jitter = 0.0
    for _ in range(6):
        try:
            L = np.linalg.cholesky(cov + jitter * np.eye(m))
            L.flags.writeable = False
            return L
        except np.linalg.LinAlgError:
            jitter = 1e-12 if jitter == 0.0 else jitter * 100
    raise np.linalg.LinAlgError(f"OU covariance for m={m} is not positive definite")


def _ou_paths(rng: RngStream, count: int, m: int) -> np.ndarray:
    return rng.normal((count, m)) @ _ou_factor(m).T


def ou_innovation(m: int, rng: RngStream) -> GridCurve:
    """Stationary Gaussian curve with ``Cov(e(s), e(t)) = 2^{-200|s-t|}``."""
    return GridCurve(_ou_paths(rng, 1, m)[0], Grid.uniform(m))


@lru_cache(maxsize=None)
def _int_exp_t2() -> float:
    return quad(lambda t: math.exp(t * t), 0.0, 1.0, epsabs=0.0, epsrel=1e-13)[0]


def far_constant(S: float) -> float:
    """``c`` such that ``c exp((t^2+s^2)/2)`` has HS norm ``S`` on [0,1]^2."""
    return S / _int_exp_t2()


def _operator_matrix(kernel: np.ndarray, w: np.ndarray) -> np.ndarray:
    # (K x)(t_a) = sum_b w_b K(t_a, s_b) x(s_b); applied as x @ M
    return (kernel * w[None, :]).T


def _simulate_far(spec: DgpSpec, main: RngStream, burn: RngStream, grid: Grid) -> np.ndarray:
    eps = _bm_paths(main, spec.n, spec.m)
    if spec.far_S == 0.0:
        return eps
    t = grid.points
    psi = far_constant(spec.far_S) * np.exp((t[:, None] ** 2 + t[None, :] ** 2) / 2.0)
    op = _operator_matrix(psi, grid.weights)
    u = np.zeros(spec.m)
    for e in _bm_paths(burn, spec.burnin, spec.m):
        u = u @ op + e
    out = np.empty_like(eps)
    for i in range(spec.n):
        u = u @ op + eps[i]
        out[i] = u
    return out


def _simulate_fgarch(
    spec: DgpSpec, main: RngStream, burn: RngStream, grid: Grid, record_sigma2=None
) -> np.ndarray:
    t = grid.points
    bump = t * (1.0 - t)
    kern = 12.0 * np.outer(bump, bump)
    a_op = _operator_matrix(spec.garch_alpha * kern, grid.weights)
    b_op = _operator_matrix(spec.garch_beta * kern, grid.weights)
    delta = np.full(spec.m, spec.garch_delta)
    eps = np.vstack([_ou_paths(burn, spec.burnin, spec.m), _ou_paths(main, spec.n, spec.m)])
    out = np.empty((spec.n, spec.m))
    u_prev = np.zeros(spec.m)
    sig2 = delta
    for i in range(spec.burnin + spec.n):
        if i > 0:
            sig2 = delta + (u_prev**2) @ a_op + sig2 @ b_op
        if record_sigma2 is not None:
            record_sigma2.append(sig2)
        u_prev = np.sqrt(sig2) * eps[i]
        if i >= spec.burnin:
            out[i - spec.burnin] = u_prev
    return out


def simulate(spec: DgpSpec, _record_sigma2=None) -> FunctionalSample:
    """Draw ``spec.n`` curves after discarding ``spec.burnin`` warm-up curves."""
    grid = Grid.uniform(spec.m)
    root = RngStream(spec.seed)
    main, burn = root.child(0), root.child(1)
    if spec.id == "iid_bm":
        values = _bm_paths(main, spec.n, spec.m)
    elif spec.id == "far1":
        values = _simulate_far(spec, main, burn, grid)
    else:
        values = _simulate_fgarch(spec, main, burn, grid, _record_sigma2)
    return FunctionalSample(values, grid)
