"""Quadrature for J_{lambda,D} and T_lambda on grid functions.

Up to three integration dimensions the midpoint tensor rule is used; beyond
that a seeded scrambled Halton sequence samples the integration box.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.stats import qmc

from ..exponents import as_order
from ..ratlinalg import BlockMatrix, inverse
from . import kernels
from .grid import AxisSpec, GridFunction, ShapeMismatch, default_axes

GUARD = 1e-12
HALTON_MIN_DIM = 4
DEFAULT_SAMPLES = 1 << 15


def _out_points(out_axes: Sequence[AxisSpec]) -> np.ndarray:
    mesh = np.meshgrid(*[a.midpoints() for a in out_axes], indexing="ij")
    return np.ascontiguousarray(np.stack([g.ravel() for g in mesh], axis=1))


def _cell_diameter(axes: Sequence[AxisSpec]) -> float:
    return float(np.sqrt(sum(a.h ** 2 for a in axes)))


def _halton(d: int, count: int, seed: int) -> np.ndarray:
    return qmc.Halton(d=d, scramble=True, seed=np.random.default_rng(seed)).random(count)


def _support_samples(f: GridFunction, samples: int, seed: int):
    """Quadrature nodes and weights for integrating against f over its grid box."""
    if f.dims < HALTON_MIN_DIM:
        mask = f.values > 0
        mesh = f.mesh()
        Y = np.stack([g[mask] for g in mesh], axis=1)
        W = f.values[mask] * f.cell_volume
        return np.ascontiguousarray(Y), np.ascontiguousarray(W), "midpoint"
    u = _halton(f.dims, samples, seed)
    lo = np.array([-a.L for a in f.axes])
    width = np.array([2 * a.L for a in f.axes])
    Y = lo + u * width
    idx = tuple(np.minimum((u[:, k] * a.N).astype(np.int64), a.N - 1) for k, a in enumerate(f.axes))
    vals = f.values[idx]
    keep = vals > 0
    W = vals[keep] * float(np.prod(width)) / samples
    return np.ascontiguousarray(Y[keep]), np.ascontiguousarray(W), "halton"


def eval_J(D: BlockMatrix, lam, f: GridFunction, out_axes: Sequence[AxisSpec] | None = None,
           samples: int = DEFAULT_SAMPLES, seed: int = 0) -> GridFunction:
    """J f(x) = integral f(y) (sum_i |D_i x - y_i|_2)^(-lam) dy at the output midpoints."""
    if D.kind != "J":
        raise ShapeMismatch("eval_J needs a kind-J matrix")
    m, n = D.m, D.n
    if f.dims != m * n:
        raise ShapeMismatch(f"f has {f.dims} axes, expected mn = {m * n}")
    out_axes = tuple(out_axes) if out_axes is not None else default_axes(n)
    if len(out_axes) != n:
        raise ShapeMismatch(f"output grid needs {n} axes")
    lam = float(as_order(lam))
    X = _out_points(out_axes)
    Y, W, method = _support_samples(f, samples, seed)
    guard = GUARD * _cell_diameter(f.axes)
    Dm = np.ascontiguousarray(D.base.to_float())
    if len(W):
        out, dropped = kernels.riesz_sum(X, Y, W, Dm, m, n, lam, guard)
    else:
        out, dropped = np.zeros(X.shape[0]), 0
    vals = np.asarray(out).reshape(tuple(a.N for a in out_axes))
    return GridFunction(out_axes, vals, {"dropped": int(dropped), "method": method, "nodes": int(len(W))})


def default_int_axes(A: BlockMatrix, f: GridFunction) -> tuple[AxisSpec, ...]:
    """Integration box large enough that A(z, x) leaves f's box for larger z."""
    inv = inverse(A.base).to_float()
    reach = float(np.max(np.sum(np.abs(inv), axis=1))) * max(a.L for a in f.axes)
    d = A.m * A.n
    N = default_axes(d)[0].N
    return tuple(AxisSpec(N, reach) for _ in range(d))


def eval_T(A: BlockMatrix, lam, f: GridFunction, out_axes: Sequence[AxisSpec] | None = None,
           int_axes: Sequence[AxisSpec] | None = None, samples: int = DEFAULT_SAMPLES,
           seed: int = 0) -> GridFunction:
    """T f(x) = integral f(A(z, x)) (sum_{i<=m} |z_i|_2)^(-lam) dz, f interpolated multilinearly."""
    if A.kind != "T":
        raise ShapeMismatch("eval_T needs a kind-T matrix")
    m, n = A.m, A.n
    if f.dims != (m + 1) * n:
        raise ShapeMismatch(f"f has {f.dims} axes, expected (m+1)n = {(m + 1) * n}")
    out_axes = tuple(out_axes) if out_axes is not None else default_axes(n)
    if len(out_axes) != n:
        raise ShapeMismatch(f"output grid needs {n} axes")
    int_axes = tuple(int_axes) if int_axes is not None else default_int_axes(A, f)
    if len(int_axes) != m * n:
        raise ShapeMismatch(f"integration grid needs {m * n} axes")
    lam = float(as_order(lam))
    d = m * n
    if d < HALTON_MIN_DIM:
        mesh = np.meshgrid(*[a.midpoints() for a in int_axes], indexing="ij")
        Z = np.stack([g.ravel() for g in mesh], axis=1)
        vol = float(np.prod([a.h for a in int_axes]))
        method = "midpoint"
    else:
        lo = np.array([-a.L for a in int_axes])
        width = np.array([2 * a.L for a in int_axes])
        Z = lo + _halton(d, samples, seed) * width
        vol = float(np.prod(width)) / samples
        method = "halton"
    dist = sum(np.sqrt(np.sum(Z[:, i * n:(i + 1) * n] ** 2, axis=1)) for i in range(m))
    bad = dist < GUARD * _cell_diameter(int_axes)
    safe = np.where(bad, 1.0, dist)
    W = np.where(bad, 0.0, safe ** -lam) * vol
    Af = A.base.to_float()
    P0 = np.ascontiguousarray(Z @ Af[:, :d].T)
    V = np.ascontiguousarray(_out_points(out_axes) @ Af[:, d:].T)
    shape = np.array([a.N for a in f.axes], dtype=np.int64)
    lo = np.array([-a.L for a in f.axes])
    h = np.array([a.h for a in f.axes])
    out = kernels.interp_sum(P0, V, np.ascontiguousarray(W), f.values.ravel(), shape, lo, h)
    vals = np.asarray(out).reshape(tuple(a.N for a in out_axes))
    return GridFunction(out_axes, vals, {"dropped": int(bad.sum()), "method": method, "nodes": int(len(W))})

