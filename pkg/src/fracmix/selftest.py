"""Seeded property suites backed by the matrix and norm lemmas.

Each suite returns a :class:`SuiteResult`; ``run_all`` drives them for the
``selftest`` command.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ratlinalg import (BlockMatrix, RatMatrix, corner_rank_equiv_check, is_invertible, random_invertible,
                        random_matrix, schur_identity_check)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    first_failure: str | None = None
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, good: bool, detail: str) -> None:
        if good:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = detail


def random_T_matrix(rng: random.Random, m: int, n: int, deficient_corner: bool) -> BlockMatrix:
    """Random invertible kind-T matrix; optionally with a rank-deficient A_{m+1,m+1}."""
    size = (m + 1) * n
    for _ in range(1000):
        M = random_matrix(rng, size, size, bound=7, zero_prob=0.25)
        if deficient_corner:
            rows = M.tolist()
            r = size - 1 - rng.randrange(n)
            for c in range(m * n, size):
                rows[r][c] = Fraction(0)
            M = RatMatrix.from_rows(rows)
        if is_invertible(M):
            return BlockMatrix(m, n, "T", M)
    raise RuntimeError("could not sample an invertible matrix")


def suite_schur(seed: int, count: int = 500) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult("block-inverse")
    singular_a3 = 0
    for k in range(count):
        n1, n2 = rng.randint(1, 3), rng.randint(1, 3)
        A = random_invertible(rng, n1 + n2, bound=7, zero_prob=0.35)
        singular_a3 += not is_invertible(RatMatrix.from_rows([A.row(i)[:n2] for i in range(n1, n1 + n2)]))
        res.record(schur_identity_check(A, n1, n2), f"instance {k}: n1={n1}, n2={n2}, A={A.to_strings()}")
    res.notes["singular_A3"] = singular_a3
    return res


def suite_corner(seed: int, count: int = 500) -> SuiteResult:
    rng = random.Random(seed + 1)
    res = SuiteResult("corner-rank")
    for k in range(count):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        while (m + 1) * n > 6:
            m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = random_T_matrix(rng, m, n, deficient_corner=bool(k % 2))
        res.record(corner_rank_equiv_check(A), f"instance {k}: m={m}, n={n}, A={A.base.to_strings()}")
    return res


def suite_translation(seed: int, count: int = 50) -> SuiteResult:
    from .numeric.grid import AxisSpec, GridFunction
    from .numeric.probes import translation_limit_probe

    rng = np.random.default_rng(seed)
    res = SuiteResult("translation-limit")
    for k in range(count):
        p = [Fraction(int(rng.integers(2, 9)), int(rng.integers(1, 4))) for _ in range(2)]
        p = [max(x, Fraction(1)) for x in p]
        axes = (AxisSpec(8, 2.0), AxisSpec(8, 2.0))
        vals = (rng.random((8, 8)) < 0.5).astype(float)
        vals[0, 0] = 1.0
        f = GridFunction(axes, vals)
        group = int(rng.integers(1, 3))
        (_, r), = translation_limit_probe(f, (1, 1), p, group, [5])
        want = 2.0 ** (1.0 / float(p[group - 1]))
        res.record(abs(r - want) < 1e-12, f"instance {k}: p={p}, k={group}, ratio={r}, want={want}")
    return res


def suite_minkowski(seed: int, count: int = 1000) -> SuiteResult:
    from .numeric.grid import AxisSpec, GridFunction
    from .numeric.norms import minkowski_swap_check

    rng = np.random.default_rng(seed)
    res = SuiteResult("minkowski-swap")
    for k in range(count):
        N1, N2 = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        vals = rng.random((N1, N2)) * (rng.random((N1, N2)) < 0.7)
        f = GridFunction((AxisSpec(N1, 1.0), AxisSpec(N2, 1.0)), vals)
        out = minkowski_swap_check(f, (1, 1), ["3", "2"], 1)
        res.record(out.holds, f"instance {k}: lhs={out.lhs!r} rhs={out.rhs!r}")
    return res


def suite_tail(seed: int) -> SuiteResult:
    from .numeric.norms import tail_scaling_check

    res = SuiteResult("tail-scaling")
    Rs = [2 ** k for k in range(11)]
    for row in tail_scaling_check([1], ["2"], 1, Rs):
        res.record(abs(row.compensated - 2 ** 0.5) < 1e-9, f"R={row.R}: {row.compensated!r}")
    comp = [row.compensated for row in tail_scaling_check([1, 1], ["2", "2"], 2, Rs)]
    res.record(max(comp) <= 2 * min(comp), f"two-group spread {max(comp) / min(comp)}")
    return res


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [suite_schur(seed), suite_corner(seed), suite_translation(seed), suite_minkowski(seed),
            suite_tail(seed)]
