"""Test-function families from the necessity arguments and the ratio probe built on them."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..decide import DomainError, ProblemJ, ProblemT
from ..exponents import Exponent, as_order, conjugate, exponent_vector, parse_rational
from ..profile import reduce_kernel
from .grid import AxisSpec, GridFunction, IncompatibleGrid, ShapeMismatch, box_indicator, default_axes, uniform_axes
from .norms import lq_norm, mixed_norm
from .operators import eval_J, eval_T

FAMILIES = ("dilation", "translation", "logpower", "boxE")


# ---- dilation -------------------------------------------------------------------

def _aligned(a: Fraction, src: AxisSpec, dst: AxisSpec) -> bool:
    """a times every dst midpoint is a src midpoint."""
    hs, hd = src.exact_h(), dst.exact_h()
    first = (a * (-Fraction(dst.L) + hd / 2) + Fraction(src.L)) / hs - Fraction(1, 2)
    step = a * hd / hs
    return first.denominator == 1 and step.denominator == 1


def dilation_family(f: GridFunction, p, n: int, a, target: Sequence[AxisSpec] | None = None) -> GridFunction:
    """f_a = a^(n/p_1 + ... + n/p_k) f(a .).

    Without ``target`` the samples are kept and the grid is shrunk by a, which
    is always exact. With ``target`` the values are read off f at a times the
    target midpoints; a must map those midpoints onto f's midpoints.
    """
    ps = exponent_vector(p)
    if len(ps) * n != f.dims:
        raise ShapeMismatch(f"{len(ps)} groups of {n} axes do not fit {f.dims} axes")
    a = as_order(a)
    pref = float(a) ** float(n * sum((pe.recip for pe in ps), Fraction(0)))
    if target is None:
        axes = tuple(AxisSpec(ax.N, ax.L / float(a)) for ax in f.axes)
        return GridFunction(axes, f.values * pref, {"dilation": str(a)})
    target = tuple(target)
    if len(target) != f.dims:
        raise ShapeMismatch("target grid has the wrong number of axes")
    idx = []
    for src, dst in zip(f.axes, target):
        if not _aligned(a, src, dst):
            raise IncompatibleGrid(f"a = {a} does not map midpoints of {dst} onto {src}")
        hs, hd = src.exact_h(), dst.exact_h()
        first = (a * (-Fraction(dst.L) + hd / 2) + Fraction(src.L)) / hs - Fraction(1, 2)
        step = a * hd / hs
        idx.append(int(first) + int(step) * np.arange(dst.N))
    vals = np.zeros(tuple(ax.N for ax in target))
    inside = [(i >= 0) & (i < src.N) for i, src in zip(idx, f.axes)]
    sel = np.ix_(*[i[ok] for i, ok in zip(idx, inside)])
    dst_sel = np.ix_(*[np.nonzero(ok)[0] for ok in inside])
    vals[dst_sel] = f.values[sel] * pref
    return GridFunction(target, vals, {"dilation": str(a)})


# ---- translation ----------------------------------------------------------------

def translate_sum(f: GridFunction, axis: int, a) -> GridFunction:
    """f + f(. - a e_axis) on a grid widened symmetrically to hold both copies."""
    ax = f.axes[axis]
    a = Fraction(a)
    cells = a / ax.exact_h()
    if cells.denominator != 1 or cells < 0:
        raise IncompatibleGrid(f"shift {a} is not a nonnegative multiple of the cell width {ax.exact_h()}")
    s = int(cells)
    wide = AxisSpec(ax.N + 2 * s, ax.L + s * ax.h)
    shape = list(f.values.shape)
    shape[axis] = wide.N
    vals = np.zeros(shape)
    base = [slice(None)] * f.dims
    base[axis] = slice(s, s + ax.N)
    vals[tuple(base)] += f.values
    moved = [slice(None)] * f.dims
    moved[axis] = slice(2 * s, 2 * s + ax.N)
    vals[tuple(moved)] += f.values
    axes = list(f.axes)
    axes[axis] = wide
    return GridFunction(tuple(axes), vals)


def translation_limit_probe(f: GridFunction, group_sizes: Sequence[int], p, k: int,
                            shifts: Sequence) -> list[tuple[Fraction, float]]:
    """(a, ||f(. - a e) + f|| / ||f||) with e the first unit vector of group k (1-based)."""
    ps = exponent_vector(p)
    if sum(group_sizes) != f.dims or len(ps) != len(group_sizes):
        raise ShapeMismatch("groups and exponents do not fit f")
    if not 1 <= k <= len(group_sizes):
        raise ShapeMismatch(f"group k={k} out of range")
    axis = sum(group_sizes[:k - 1])
    ref = mixed_norm(f, group_sizes, ps)
    out = []
    for a in shifts:
        g = translate_sum(f, axis, a)
        out.append((Fraction(a), mixed_norm(g, group_sizes, ps) / ref))
    return out


# ---- log-power profile ------------------------------------------------------------

@dataclass(frozen=True)
class LogPower:
    """h(r) = r^(-n/q') log(1/r)^(-(1+eps)/q') for 0 < r < cutoff, else 0."""

    n: int
    q: Exponent
    eps: Fraction
    cutoff: Fraction = Fraction(1, 2)

    @property
    def qp(self) -> Exponent:
        return conjugate(self.q)

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        inv = float(self.qp.recip)
        on = (r > 0) & (r < float(self.cutoff))
        safe = np.where(on, r, 0.5 * float(self.cutoff))
        val = safe ** (-self.n * inv) * np.log(1.0 / safe) ** (-(1 + float(self.eps)) * inv)
        return np.where(on, val, 0.0)

    def qprime_power_integral(self) -> float:
        """Integral over R^n of h^(q') when q' is finite, in closed form (cutoff 1/2 or less)."""
        from .norms import sphere_area
        if self.qp.is_inf:
            raise DomainError("q' = inf")
        e = float(self.eps)
        return sphere_area(self.n) * math.log(1.0 / float(self.cutoff)) ** (-e) / e


def logpower_counterexample(n: int, q, eps=None, cutoff=Fraction(1, 2), p_k0=None) -> LogPower:
    """The log-power profile; eps defaults to (q'/p'_{k0} - 1)/2 when p_k0 is given."""
    q = Exponent.of(q)
    if q <= 1:
        raise DomainError("need q > 1")
    if eps is None:
        if p_k0 is None:
            raise DomainError("give eps or p_k0")
        eps = default_epsilon(q, p_k0)
    eps = Fraction(eps) if not isinstance(eps, str) else parse_rational(eps)
    if eps <= 0:
        raise DomainError("need eps > 0")
    cutoff = Fraction(cutoff)
    if not 0 < cutoff <= Fraction(1, 2):
        raise DomainError("cutoff must lie in (0, 1/2]")
    return LogPower(n, q, eps, cutoff)


def default_epsilon(q, p_k0) -> Fraction:
    """(q'/p'_{k0} - 1)/2, positive exactly when q < p_{k0}."""
    q, pk = Exponent.of(q), Exponent.of(p_k0)
    qp, pkp = conjugate(q), conjugate(pk)
    if qp.is_inf or pkp.is_inf:
        raise DomainError("rule needs finite conjugates")
    eps = (qp.value / pkp.value - 1) / 2
    if eps <= 0:
        raise DomainError(f"rule gives eps = {eps} <= 0 (needs q < p_k0)")
    return eps


# ---- ratio probe ------------------------------------------------------------------

@dataclass
class ProbeRow:
    param: Fraction
    out_norm: float | None
    in_norm: float | None
    ratio: float | None
    skipped: bool = False


@dataclass
class ProbeReport:
    family: str
    params: list[Fraction]
    rows: list[ProbeRow]
    meta: dict = field(default_factory=dict)

    @property
    def ratios(self) -> list[float]:
        return [r.ratio for r in self.rows if not r.skipped]


def problem_digest(prob: ProblemT | ProblemJ) -> str:
    mat = prob.A if isinstance(prob, ProblemT) else prob.D
    text = "|".join([type(prob).__name__, str(prob.m), str(prob.n),
                     ";".join(",".join(r) for r in mat.base.to_strings()),
                     ",".join(str(x) for x in prob.p), str(prob.q), str(prob.lam)])
    return hashlib.sha256(text.encode()).hexdigest()


_DEFAULT_PARAMS = {
    "dilation": [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4)],
    "translation": [Fraction(0), Fraction(1), Fraction(2), Fraction(4)],
    "logpower": [Fraction(1, 2 ** k) for k in range(2, 9)],
    "boxE": [Fraction(1, 2 ** k) for k in range(1, 5)],
}


@dataclass(frozen=True)
class GridSpec:
    """Input grid (N, L per axis); the output grid defaults to the same N and L on n axes."""

    N: int | None = None
    L: float | None = None
    out_N: int | None = None
    out_L: float | None = None
    samples: int = 1 << 15
    eps: Fraction | None = None


def _input_axes(d: int, family: str, grid: GridSpec) -> tuple[AxisSpec, ...]:
    if family == "logpower":
        N0, L0 = (512, 1.0) if d <= 2 else (64, 1.0)
    else:
        N0, L0 = default_axes(d)[0].N, default_axes(d)[0].L
    return uniform_axes(d, grid.N or N0, grid.L or L0)


def _output_axes(n: int, family: str, inp: tuple[AxisSpec, ...], grid: GridSpec) -> tuple[AxisSpec, ...]:
    if family == "logpower":
        N0, L0 = inp[0].N, 4.0
    else:
        N0, L0 = inp[0].N, inp[0].L
    return uniform_axes(n, grid.out_N or N0, grid.out_L or L0)


def _logpower_input(prob: ProblemJ, axes, eps: Fraction, delta: Fraction) -> GridFunction:
    cf = reduce_kernel(prob.D)
    m, n = prob.m, prob.n
    sel = list(cf.selected_global)
    free = [r for r in range(m * n) if r not in set(sel)]
    if not free:
        raise ValueError("logpower family needs m >= 2 (no free combination of y)")
    c = Fraction(1, n + 2)
    prof = logpower_counterexample(len(free), prob.q, eps, cutoff=c)
    P = cf.P.to_float()

    def fn(*pts):
        Y = np.stack(pts, axis=-1)
        PY = Y @ P.T
        w = np.sqrt(np.sum(PY[..., free] ** 2, axis=-1))
        piv = np.max(np.abs(PY[..., sel]), axis=-1)
        return prof(w) * ((w > float(delta)) & (piv <= float(c)))
    return GridFunction.sample(axes, fn)


def ratio_probe(prob: ProblemT | ProblemJ, family: str, params: Sequence | None = None,
                grid: GridSpec | None = None, seed: int = 0) -> ProbeReport:
    """Evaluate ||op f||_q / ||f||_p along a family; the report is evidence, not a verdict."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    grid = grid or GridSpec()
    params = [as_param(x) for x in (params if params is not None else _DEFAULT_PARAMS[family])]
    is_T = isinstance(prob, ProblemT)
    m, n = prob.m, prob.n
    groups = m + 1 if is_T else m
    d = groups * n
    gsizes = [n] * groups
    inp = _input_axes(d, family, grid)
    out_axes = _output_axes(n, family, inp, grid)
    base = box_indicator(inp, [-1.0] * d, [1.0] * d)
    eps = grid.eps

    if family == "logpower":
        if is_T:
            raise ValueError("logpower family is defined for J problems")
        if eps is None:
            above = [pe for pe in prob.p if pe > 1]
            try:
                eps = default_epsilon(prob.q, above[-1] if above else prob.p[-1])
            except DomainError:
                eps = Fraction(1, 10)

    def op(f: GridFunction) -> GridFunction:
        if is_T:
            return eval_T(prob.A, prob.lam, f, out_axes, samples=grid.samples, seed=seed)
        return eval_J(prob.D, prob.lam, f, out_axes, samples=grid.samples, seed=seed)

    rows, dropped, method = [], 0, None
    for t in params:
        if family == "dilation":
            f = dilation_family(base, prob.p, n, t)
        elif family == "translation":
            f = translate_sum(base, d - n, t)
        elif family == "boxE":
            f = box_indicator(inp, [-float(t)] * d, [float(t)] * d)
        else:
            f = _logpower_input(prob, inp, eps, t)
        if f.is_zero():
            rows.append(ProbeRow(t, None, None, None, skipped=True))
            continue
        g = op(f)
        dropped += g.meta["dropped"]
        method = g.meta["method"]
        num = lq_norm(g, prob.q)
        den = mixed_norm(f, gsizes, prob.p)
        rows.append(ProbeRow(t, num, den, num / den))
    meta = {
        "inputGrid": [[a.N, a.L] for a in inp],
        "outputGrid": [[a.N, a.L] for a in out_axes],
        "seed": seed,
        "problemHash": problem_digest(prob),
        "droppedPairs": dropped,
        "method": method,
    }
    if eps is not None:
        meta["eps"] = str(eps)
    return ProbeReport(family, params, rows, meta)


def as_param(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return parse_rational(str(x))
