"""Compare the compiled and numpy quadrature kernels on probe-sized workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from fracmix.numeric import _kernels_py

try:
    from fracmix.numeric import _kernels as _compiled
except ImportError:
    _compiled = None


def riesz_case(rng):
    # J with m=2, n=1: 4096 support cells against 512 output points
    X = rng.uniform(-4, 4, size=(512, 1))
    Y = rng.uniform(-1, 1, size=(4096, 2))
    W = rng.random(4096)
    D = np.ones((2, 1))
    return (X, Y, W, D, 2, 1, 1.25, 1e-12)


def interp_case(rng):
    # T with m=1, n=1: 4096 integration nodes, 64 outputs, 256^2 input grid
    P0 = rng.uniform(-3, 3, size=(4096, 2))
    V = rng.uniform(-1, 1, size=(64, 2))
    W = rng.random(4096)
    F = rng.random(256 * 256)
    return (P0, V, W, F, np.array([256, 256], dtype=np.int64), np.array([-4.0, -4.0]), np.array([1 / 32, 1 / 32]))


def bench(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    cases = {"riesz_sum": riesz_case(rng), "interp_sum": interp_case(rng)}
    print(f"{'kernel':<12} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8}")
    for name, case in cases.items():
        t_py = bench(getattr(_kernels_py, name), case, args.repeat)
        if _compiled is None:
            print(f"{name:<12} {t_py:>10.4f} {'n/a':>11} {'':>8}")
            continue
        t_c = bench(getattr(_compiled, name), case, args.repeat)
        a = getattr(_kernels_py, name)(*case)
        b = getattr(_compiled, name)(*case)
        a = a[0] if isinstance(a, tuple) else a
        b = b[0] if isinstance(b, tuple) else b
        assert np.allclose(a, b, rtol=1e-10), name
        print(f"{name:<12} {t_py:>10.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
