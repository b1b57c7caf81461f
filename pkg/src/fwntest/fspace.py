"""Curves on a shared grid of (0, 1] and their quadrature inner products.

A functional sample is stored as an ``(n, m)`` array: row ``t`` holds the
values of curve ``u_t`` at the ``m`` grid points.  The L2 inner product is
approximated by the weighted sum ``sum_i w_i f(t_i) g(t_i)``; every lag
statistic downstream is a function of the resulting Gram matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _backend
from .errors import FwnError, GridMismatchError, InsufficientDataError

__all__ = [
    "Grid",
    "GridCurve",
    "FunctionalSample",
    "inner_product",
    "gram",
    "center",
    "difference",
]


@dataclass(frozen=True, eq=False)
class Grid:
    """Evaluation points ``t_1 < ... < t_m`` in (0, 1] with quadrature weights."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.array(self.points, dtype=float).reshape(-1)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if points.size == 0:
            raise FwnError("grid must contain at least one point")
        if points.shape != weights.shape:
            raise FwnError(
                f"grid has {points.size} points but {weights.size} weights"
            )
        if np.any(np.diff(points) <= 0):
            raise FwnError("grid points must be strictly increasing")
        if points[0] <= 0 or points[-1] > 1:
            raise FwnError("grid points must lie in (0, 1]")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise FwnError("quadrature weights must be finite and positive")
        points.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, m: int) -> "Grid":
        """Grid ``t_i = i/m`` with equal weights ``1/m``."""
        if m < 1:
            raise FwnError("grid size must be >= 1")
        return cls(np.arange(1, m + 1) / m, np.full(m, 1.0 / m))

    @classmethod
    def scalar(cls) -> "Grid":
        """One-point grid with unit weight; embeds a real-valued series."""
        return cls(np.array([1.0]), np.array([1.0]))

    @property
    def size(self) -> int:
        return self.points.size

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Grid):
            return NotImplemented
        return np.array_equal(self.points, other.points) and np.array_equal(
            self.weights, other.weights
        )

    def __hash__(self):
        return hash((self.points.tobytes(), self.weights.tobytes()))


@dataclass(frozen=True, eq=False)
class GridCurve:
    """A single curve sampled on a :class:`Grid`."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != self.grid.size:
            raise FwnError(
                f"curve has {values.size} values, grid has {self.grid.size} points"
            )
        if not np.all(np.isfinite(values)):
            raise FwnError("curve values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


class FunctionalSample:
    """``n`` curves on one shared grid.

    Parameters
    ----------
    values : array_like, shape (n, m)
        Row ``t`` holds curve ``u_t`` evaluated at the grid points.
    grid : Grid, optional
        Defaults to the uniform grid of size ``m``.
    """

    def __init__(self, values, grid: Grid | None = None):
        arr = np.array(values, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if grid is None or grid.size == 1 else arr.reshape(1, -1)
        if arr.ndim != 2:
            raise FwnError("sample values must be a 2-d array (curves x grid points)")
        if grid is None:
            grid = Grid.scalar() if arr.shape[1] == 1 else Grid.uniform(arr.shape[1])
        if arr.shape[1] != grid.size:
            raise GridMismatchError(
                f"sample has {arr.shape[1]} columns, grid has {grid.size} points"
            )
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise FwnError(f"non-finite value at curve {bad[0]}, grid point {bad[1]}")
        arr.flags.writeable = False
        self._values = arr
        self._grid = grid

    @classmethod
    def from_curves(cls, curves) -> "FunctionalSample":
        curves = list(curves)
        if not curves:
            raise InsufficientDataError("no curves given")
        grid = curves[0].grid
        for c in curves[1:]:
            if c.grid != grid:
                raise GridMismatchError("all curves must share one grid")
        return cls(np.vstack([c.values for c in curves]), grid)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def grid(self) -> Grid:
        return self._grid

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def m(self) -> int:
        return self._values.shape[1]

    @property
    def curves(self) -> list[GridCurve]:
        return [GridCurve(row, self._grid) for row in self._values]

    def __len__(self):
        return self.n

    def __getitem__(self, t):
        """Integer index gives a :class:`GridCurve`; a slice gives a sub-sample."""
        if isinstance(t, slice):
            return FunctionalSample(self._values[t], self._grid)
        return GridCurve(self._values[t], self._grid)

    def scaled(self, c: float) -> "FunctionalSample":
        return FunctionalSample(c * self._values, self._grid)

    @cached_property
    def gram(self) -> np.ndarray:
        return gram(self)

    def __repr__(self):
        return f"FunctionalSample(n={self.n}, m={self.m})"


def inner_product(f: GridCurve, g: GridCurve) -> float:
    """Quadrature inner product ``sum_i w_i f_i g_i``."""
    if f.grid != g.grid:
        raise GridMismatchError("curves live on different grids")
    return float(np.sum(f.grid.weights * f.values * g.values))


def gram(sample: FunctionalSample) -> np.ndarray:
    """``G[s, t] = <u_s, u_t>`` for every pair of curves.

    The result is exactly symmetric (the upper triangle is mirrored).
    """
    g = _backend.gram(sample.values, sample.grid.weights)
    g.flags.writeable = False
    return g


def center(sample: FunctionalSample) -> FunctionalSample:
    """Subtract the pointwise mean curve."""
    x = sample.values
    return FunctionalSample(x - x.mean(axis=0, keepdims=True), sample.grid)


def difference(sample: FunctionalSample) -> FunctionalSample:
    """First differences ``Y_i = X_i - X_{i-1}``; returns ``n - 1`` curves."""
    if sample.n < 2:
        raise InsufficientDataError(
            f"differencing needs at least 2 curves, got {sample.n}"
        )
    return FunctionalSample(np.diff(sample.values, axis=0), sample.grid)
