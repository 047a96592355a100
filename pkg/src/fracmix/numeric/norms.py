"""Mixed Lebesgue norms on grids, the Minkowski swap and the tail scaling table."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate, special

from ..decide import DomainError
from ..exponents import Exponent, as_order, exponent_vector
from .grid import GridFunction, ShapeMismatch


class PreconditionViolated(ValueError):
    pass


def _group_axes(group_sizes: Sequence[int]) -> list[tuple[int, ...]]:
    out, start = [], 0
    for g in group_sizes:
        out.append(tuple(range(start, start + g)))
        start += g
    return out


def mixed_norm(f: GridFunction, group_sizes: Sequence[int], p, order: Sequence[int] | None = None) -> float:
    """Nested norm: group 1 (the first axes) is reduced first unless ``order`` says otherwise.

    ``order`` lists 0-based group indices in reduction order.
    """
    ps = exponent_vector(p)
    if sum(group_sizes) != f.dims or len(ps) != len(group_sizes) or any(g <= 0 for g in group_sizes):
        raise ShapeMismatch(f"groups {tuple(group_sizes)} / exponents {len(ps)} do not fit {f.dims} axes")
    order = list(range(len(ps))) if order is None else list(order)
    if sorted(order) != list(range(len(ps))):
        raise ShapeMismatch(f"order {order} is not a permutation of the groups")
    groups = _group_axes(group_sizes)
    v = f.values
    for gi in order:
        axes = groups[gi]
        vol = float(np.prod([f.axes[a].h for a in axes]))
        pe = ps[gi]
        if pe.is_inf:
            v = np.max(v, axis=axes, keepdims=True)
        else:
            e = float(pe)
            v = (np.sum(v ** e, axis=axes, keepdims=True) * vol) ** (1.0 / e)
    return float(v.reshape(()))


def lq_norm(f: GridFunction, q) -> float:
    """Plain L^q over all axes; q = inf is the grid max."""
    q = Exponent.of(q)
    if q.is_inf:
        return float(np.max(f.values)) if f.values.size else 0.0
    e = float(q)
    return float((np.sum(f.values ** e) * f.cell_volume) ** (1.0 / e))


@dataclass(frozen=True)
class SwapResult:
    lhs: float
    rhs: float
    holds: bool


def minkowski_swap_check(f: GridFunction, group_sizes: Sequence[int], p, i: int) -> SwapResult:
    """Compare the norm with groups i and i+1 (1-based) reduced in swapped order against the standard one."""
    ps = exponent_vector(p)
    if not 1 <= i < len(ps):
        raise ShapeMismatch(f"i must lie in 1..{len(ps) - 1}")
    if ps[i - 1] < ps[i]:
        raise PreconditionViolated(f"need p_{i} >= p_{i + 1}")
    order = list(range(len(ps)))
    order[i - 1], order[i] = order[i], order[i - 1]
    lhs = mixed_norm(f, group_sizes, ps, order)
    rhs = mixed_norm(f, group_sizes, ps)
    return SwapResult(lhs, rhs, lhs <= rhs + 1e-12 * rhs)


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere in R^n (2 for n = 1)."""
    return 2.0 * math.pi ** (n / 2) / special.gamma(n / 2)


@dataclass(frozen=True)
class TailRow:
    R: Fraction
    norm: float
    compensated: float


def _tail_norm(group_dims, ps, alpha: float, R: float) -> float:
    # |x_i| are Euclidean radii; the profile depends on x_i only through s_i,
    # so each group integral is one-dimensional with weight sphere_area * s^(n_i - 1).
    def level(k: int, t: float) -> float:
        if k < 0:
            return (t ** -alpha) if t >= R else 0.0
        n, pe = group_dims[k], ps[k]
        if pe.is_inf:
            # every level is nonincreasing in its argument, so the sup over s >= 0 sits at s = 0,
            # except that the bare profile vanishes below the cutoff R
            return level(k - 1, max(t, R) if k == 0 else t)
        e = float(pe)
        lo = max(0.0, R - t)
        val, _ = integrate.quad(lambda s: s ** (n - 1) * level(k - 1, s + t) ** e, lo, np.inf,
                                epsabs=0.0, epsrel=1e-12, limit=200)
        return (sphere_area(n) * val) ** (1.0 / e)

    return level(len(group_dims) - 1, 0.0)


def tail_scaling_check(group_dims: Sequence[int], p, alpha, Rs: Sequence) -> list[TailRow]:
    """Norm of chi_{sum|x_i| >= R} (sum|x_i|)^(-alpha) and its value times R^(alpha - sum n_i/p_i)."""
    ps = exponent_vector(p)
    if len(ps) != len(group_dims):
        raise ShapeMismatch("one exponent per group")
    alpha = as_order(alpha)
    crit = sum((n * pe.recip for n, pe in zip(group_dims, ps)), Fraction(0))
    if alpha <= crit:
        raise DomainError(f"need alpha > sum n_i/p_i = {crit}")
    Rs = [Fraction(r) for r in Rs]
    if Fraction(1) not in Rs:
        Rs = [Fraction(1)] + Rs
    rows = []
    for R in Rs:
        nv = _tail_norm(list(group_dims), ps, float(alpha), float(R))
        rows.append(TailRow(R, nv, nv * float(R) ** float(alpha - crit)))
    return rows
