"""Midpoint grids and grid functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np


class ShapeMismatch(ValueError):
    pass


class IncompatibleGrid(ValueError):
    pass


@dataclass(frozen=True)
class AxisSpec:
    """N cells on [-L, L]; samples sit at the cell midpoints."""

    N: int
    L: float

    def __post_init__(self):
        if self.N <= 0:
            raise ValueError("N must be positive")
        if not self.L > 0:
            raise ValueError("halfwidth must be positive")
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    def midpoints(self) -> np.ndarray:
        return -self.L + (np.arange(self.N) + 0.5) * self.h

    def exact_h(self) -> Fraction:
        return Fraction(self.L) * 2 / self.N


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Nonnegative samples on a tensor midpoint grid (array axis a = coordinate a)."""

    axes: tuple[AxisSpec, ...]
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        axes = tuple(self.axes)
        object.__setattr__(self, "axes", axes)
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.shape != tuple(a.N for a in axes):
            raise ShapeMismatch(f"values shape {vals.shape} != grid {tuple(a.N for a in axes)}")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ValueError("grid values must be finite and nonnegative")
        object.__setattr__(self, "values", vals)

    @property
    def dims(self) -> int:
        return len(self.axes)

    @property
    def cell_volume(self) -> float:
        return float(np.prod([a.h for a in self.axes]))

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*[a.midpoints() for a in self.axes], indexing="ij")

    def is_zero(self) -> bool:
        return not np.any(self.values)

    @classmethod
    def sample(cls, axes: Sequence[AxisSpec], fn: Callable[..., np.ndarray]) -> "GridFunction":
        axes = tuple(axes)
        pts = np.meshgrid(*[a.midpoints() for a in axes], indexing="ij")
        return cls(axes, np.broadcast_to(fn(*pts), tuple(a.N for a in axes)))

    @classmethod
    def zeros(cls, axes: Sequence[AxisSpec]) -> "GridFunction":
        axes = tuple(axes)
        return cls(axes, np.zeros(tuple(a.N for a in axes)))

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.axes, values, dict(self.meta))


def uniform_axes(d: int, N: int, L: float) -> tuple[AxisSpec, ...]:
    return tuple(AxisSpec(N, L) for _ in range(d))


def default_axes(d: int) -> tuple[AxisSpec, ...]:
    """N=256, L=4 up to two dimensions, N=64 beyond."""
    return uniform_axes(d, 256 if d <= 2 else 64, 4.0)


def box_indicator(axes: Sequence[AxisSpec], lo: Sequence[float], hi: Sequence[float]) -> GridFunction:
    """Indicator of the closed box, sampled at midpoints (exact when the box is cell aligned)."""
    def fn(*pts):
        inside = np.ones(pts[0].shape, dtype=bool)
        for x, a, b in zip(pts, lo, hi):
            inside &= (x >= a) & (x <= b)
        return inside.astype(np.float64)
    return GridFunction.sample(axes, fn)
