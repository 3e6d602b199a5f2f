"""Grids, sampled functions, Sturm-Liouville problems and weighted inner products.

Everything in here is immutable after construction; operations are pure
functions, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class GridMismatchError(ValueError):
    """Two sampled functions do not live on the same grid."""


@dataclass(frozen=True)
class Grid:
    """Uniform momentum lattice p_i = p_min + i*h, i = 0..n-1."""

    p_min: float
    p_max: float
    n: int

    @property
    def h(self) -> float:
        return (self.p_max - self.p_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        pts = self.p_min + self.h * np.arange(self.n)
        pts.flags.writeable = False
        return pts

    def refined(self) -> "Grid":
        """Grid with halved spacing (same endpoints, 2n-1 points)."""
        return Grid(self.p_min, self.p_max, 2 * self.n - 1)


def make_grid(p_min: float, p_max: float, n: int) -> Grid:
    if not (math.isfinite(p_min) and math.isfinite(p_max)):
        raise ValueError("grid bounds must be finite")
    if not p_min < p_max:
        raise ValueError(f"need p_min < p_max, got [{p_min}, {p_max}]")
    if n < 3:
        raise ValueError(f"need at least 3 grid points, got {n}")
    return Grid(float(p_min), float(p_max), int(n))


@dataclass(frozen=True)
class SampledFunction:
    """Real-valued function sampled on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise ValueError(
                f"expected {self.grid.n} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("sampled values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    # Pointwise algebra; scalars or same-grid functions.
    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, SampledFunction):
            require_same_grid(self, other)
            return other.values
        return np.asarray(other, dtype=float)

    def __add__(self, other):
        return SampledFunction(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SampledFunction(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return SampledFunction(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        return SampledFunction(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return SampledFunction(self.grid, self.values / self._coerce(other))

    def __rtruediv__(self, other):
        return SampledFunction(self.grid, self._coerce(other) / self.values)

    def __neg__(self):
        return SampledFunction(self.grid, -self.values)


def sample(grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> SampledFunction:
    """Sample a vectorized callable on the grid."""
    return SampledFunction(grid, np.asarray(fn(grid.points), dtype=float))


def constant(grid: Grid, value: float) -> SampledFunction:
    return SampledFunction(grid, np.full(grid.n, float(value)))


def require_same_grid(*fns: SampledFunction) -> Grid:
    grid = fns[0].grid
    for f in fns[1:]:
        if f.grid != grid:
            raise GridMismatchError(f"grid mismatch: {f.grid} vs {grid}")
    return grid


@dataclass(frozen=True)
class SturmLiouvilleProblem:
    """-(c phi')' + q phi = lambda w phi with Dirichlet ends.

    c > 0 (ellipticity) and w > 0 (positive spectral weight) everywhere.
    """

    c: SampledFunction
    q: SampledFunction
    w: SampledFunction
    bc: str = "dirichlet"

    def __post_init__(self):
        require_same_grid(self.c, self.q, self.w)
        if self.bc != "dirichlet":
            raise ValueError(f"unsupported boundary condition {self.bc!r}")
        if np.any(self.c.values <= 0):
            raise ValueError("diffusion coefficient c must be positive")
        if np.any(self.w.values <= 0):
            raise ValueError("spectral weight w must be positive")

    @property
    def grid(self) -> Grid:
        return self.c.grid


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with weight-normalized eigenfunctions."""

    eigenvalues: np.ndarray
    eigenfunctions: tuple[SampledFunction, ...]

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenfunctions", tuple(self.eigenfunctions))
        if len(self.eigenfunctions) != vals.size:
            raise ValueError("one eigenfunction per eigenvalue required")
        if vals.size > 1 and np.any(np.diff(vals) <= 0):
            raise ValueError("eigenvalues must be strictly ascending")


def weighted_inner_product(
    f: SampledFunction, g: SampledFunction, w: SampledFunction
) -> float:
    """Trapezoid-rule approximation of integral f g w dp."""
    grid = require_same_grid(f, g, w)
    return float(np.trapezoid(f.values * g.values * w.values, dx=grid.h))


def derivative(f: SampledFunction, order: int = 1) -> SampledFunction:
    """Second-order finite-difference derivative (order 1 or 2).

    Central stencils in the interior, one-sided second-order stencils at
    the two endpoints.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if f.grid.n < 5:
        raise ValueError("derivative needs at least 5 grid points")
    v = f.values
    h = f.grid.h
    out = np.empty_like(v)
    if order == 1:
        out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
        out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    else:
        out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)
        out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h)
        out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / (h * h)
    return SampledFunction(f.grid, out)


def count_interior_sign_changes(values: np.ndarray) -> int:
    """Number of sign changes among the nonzero interior samples."""
    interior = values[1:-1]
    signs = np.sign(interior)
    signs = signs[signs != 0]
    if signs.size < 2:
        return 0
    return int(np.count_nonzero(np.diff(signs)))


def inner_slice(n: int, fraction: float = 0.8) -> slice:
    """Index slice selecting the central `fraction` of n grid points."""
    margin = int(round(n * (1.0 - fraction) / 2.0))
    margin = max(margin, 1)
    return slice(margin, n - margin)
