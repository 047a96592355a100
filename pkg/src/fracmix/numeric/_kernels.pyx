# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the quadrature sums."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, floor

cnp.import_array()


def riesz_sum(const double[:, ::1] X, const double[:, ::1] Y, const double[::1] W, const double[:, ::1] D,
              int m, int n, double lam, double guard):
    """out[o] = sum_s W[s] * (sum_i |D_i X[o] - Y[s, block i]|_2)^(-lam).

    Pairs closer than ``guard`` are skipped and counted.
    """
    cdef Py_ssize_t No = X.shape[0], S = Y.shape[0], mn = m * n
    cdef Py_ssize_t o, s, i, t, r
    cdef double acc, dist, blk, diff
    cdef long dropped = 0
    out = np.zeros(No, dtype=np.float64)
    cdef double[::1] res = out
    DX_arr = np.empty(mn, dtype=np.float64)
    cdef double[::1] DX = DX_arr
    for o in range(No):
        for r in range(mn):
            acc = 0.0
            for t in range(n):
                acc += D[r, t] * X[o, t]
            DX[r] = acc
        acc = 0.0
        for s in range(S):
            dist = 0.0
            for i in range(m):
                blk = 0.0
                for t in range(n):
                    diff = DX[i * n + t] - Y[s, i * n + t]
                    blk += diff * diff
                dist += sqrt(blk)
            if dist < guard:
                dropped += 1
            else:
                acc += W[s] * pow(dist, -lam)
        res[o] = acc
    return out, dropped


def interp_sum(const double[:, ::1] P0, const double[:, ::1] V, const double[::1] W, const double[::1] F,
               const long[::1] shape, const double[::1] lo, const double[::1] h):
    """out[o] = sum_s W[s] * f(P0[s] + V[o]), f multilinear on a midpoint grid, zero outside.

    ``F`` is the C-ordered value array, ``lo`` the lower box edges and ``h``
    the cell widths per axis.
    """
    cdef Py_ssize_t No = V.shape[0], S = P0.shape[0], d = P0.shape[1]
    cdef Py_ssize_t o, s, a, c, flat, stride
    cdef double acc, wt, u, val
    cdef long idx
    cdef int ncorner = 1 << d, ok
    base_arr = np.empty(d, dtype=np.int64)
    frac_arr = np.empty(d, dtype=np.float64)
    cdef long[::1] base = base_arr
    cdef double[::1] frac = frac_arr
    out = np.zeros(No, dtype=np.float64)
    cdef double[::1] res = out
    for o in range(No):
        acc = 0.0
        for s in range(S):
            for a in range(d):
                u = (P0[s, a] + V[o, a] - lo[a]) / h[a] - 0.5
                base[a] = <long>floor(u)
                frac[a] = u - base[a]
            val = 0.0
            for c in range(ncorner):
                wt = 1.0
                flat = 0
                ok = 1
                for a in range(d):
                    if (c >> a) & 1:
                        idx = base[a] + 1
                        wt *= frac[a]
                    else:
                        idx = base[a]
                        wt *= 1.0 - frac[a]
                    if idx < 0 or idx >= shape[a]:
                        ok = 0
                        break
                    flat = flat * shape[a] + idx
                if ok and wt != 0.0:
                    val += wt * F[flat]
            acc += W[s] * val
        res[o] = acc
    return out
