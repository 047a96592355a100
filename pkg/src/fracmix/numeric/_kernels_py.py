"""numpy versions of the compiled kernels, same signatures and semantics."""

from __future__ import annotations

import itertools

import numpy as np

_CHUNK = 1 << 22  # pair budget per vectorized block


def riesz_sum(X, Y, W, D, m, n, lam, guard):
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    D = np.asarray(D, dtype=np.float64)
    DX = X @ D.T  # (No, mn)
    out = np.zeros(X.shape[0])
    dropped = 0
    step = max(1, _CHUNK // max(1, Y.shape[0]))
    for s in range(0, X.shape[0], step):
        diff = DX[s:s + step, None, :] - Y[None, :, :]
        dist = np.zeros(diff.shape[:2])
        for i in range(m):
            dist += np.sqrt(np.sum(diff[..., i * n:(i + 1) * n] ** 2, axis=-1))
        bad = dist < guard
        dropped += int(bad.sum())
        safe = np.where(bad, 1.0, dist)
        K = np.where(bad, 0.0, safe ** -lam)
        out[s:s + step] = K @ W
    return out, dropped


def interp_sum(P0, V, W, F, shape, lo, h):
    P0 = np.asarray(P0, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    W = np.asarray(W, dtype=np.float64)
    F = np.asarray(F, dtype=np.float64)
    shape = np.asarray(shape, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    d = P0.shape[1]
    out = np.zeros(V.shape[0])
    for o in range(V.shape[0]):
        u = (P0 + V[o] - lo) / h - 0.5
        base = np.floor(u).astype(np.int64)
        frac = u - base
        val = np.zeros(P0.shape[0])
        for corner in itertools.product((0, 1), repeat=d):
            wt = np.ones(P0.shape[0])
            flat = np.zeros(P0.shape[0], dtype=np.int64)
            ok = np.ones(P0.shape[0], dtype=bool)
            for a, bit in enumerate(corner):
                idx = base[:, a] + bit
                wt *= frac[:, a] if bit else 1.0 - frac[:, a]
                ok &= (idx >= 0) & (idx < shape[a])
                flat = flat * shape[a] + np.clip(idx, 0, shape[a] - 1)
            val += np.where(ok, wt * F[flat], 0.0)
        out[o] = W @ val
    return out
