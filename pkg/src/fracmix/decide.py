"""Boundedness decisions for T_lambda and J_{lambda,D} on mixed-norm spaces.

Every decision returns a :class:`Verdict` whose trace lists the conditions
that were checked, in theorem order, with the witnesses used (ranks, drop
positions, k_0 / i_0, q). Condition ids are stable:

HOMOG, A-INV, MINOR, TAILRANK, EXIST-PK, MIN-DROP, MAX-DROP, Q-LT-P1,
M0-SEARCH, LAMBDA-WINDOW, N1-INEQ.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exponents import Exponent, INF, as_order, conjugate, exponent_vector, homogeneity_gap
from .profile import RankProfile, rank_profile_J, rank_profile_T
from .ratlinalg import BlockMatrix, RatMatrix, ShapeError, is_invertible, rank, submatrix


class DomainError(ValueError):
    pass


class NotFound(LookupError):
    pass


class Status(str, enum.Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    OUTSIDE = "OutsideTheoremScope"


@dataclass(frozen=True)
class Check:
    cond: str
    cites: str
    passed: bool
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        d = {"id": self.cond, "cites": self.cites, "pass": self.passed,
             "witnesses": {k: _plain(v) for k, v in self.witnesses.items()}}
        if self.note:
            d["note"] = self.note
        return d


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason_id: str
    reason: str
    trace: tuple[Check, ...]

    @property
    def bounded(self) -> bool:
        return self.status is Status.BOUNDED

    def to_dict(self) -> dict:
        return {"status": self.status.value,
                "reason": {"id": self.reason_id, "text": self.reason},
                "trace": [c.to_dict() for c in self.trace]}


def _plain(v):
    if isinstance(v, (Exponent, Fraction)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


@dataclass(frozen=True)
class ProblemT:
    m: int
    n: int
    A: BlockMatrix
    p: tuple[Exponent, ...]
    q: Exponent
    lam: Fraction

    def __post_init__(self):
        if self.A.kind != "T" or (self.A.m, self.A.n) != (self.m, self.n):
            raise ShapeError(f"A must be a kind-T block matrix with m={self.m}, n={self.n}")
        object.__setattr__(self, "p", exponent_vector(self.p, self.m + 1))
        object.__setattr__(self, "q", Exponent.of(self.q))
        object.__setattr__(self, "lam", as_order(self.lam))


@dataclass(frozen=True)
class ProblemJ:
    m: int
    n: int
    D: BlockMatrix
    p: tuple[Exponent, ...]
    q: Exponent
    lam: Fraction

    def __post_init__(self):
        if self.D.kind != "J" or (self.D.m, self.D.n) != (self.m, self.n):
            raise ShapeError(f"D must be a kind-J block matrix with m={self.m}, n={self.n}")
        object.__setattr__(self, "p", exponent_vector(self.p, self.m))
        object.__setattr__(self, "q", Exponent.of(self.q))
        object.__setattr__(self, "lam", as_order(self.lam))


def _verdict(trace: list[Check], outside: Check | None = None) -> Verdict:
    if outside is not None:
        return Verdict(Status.OUTSIDE, outside.cond, outside.note or "outside theorem scope", tuple(trace))
    failed = next((c for c in trace if not c.passed), None)
    if failed is None:
        return Verdict(Status.BOUNDED, "ALL", "all conditions hold", tuple(trace))
    return Verdict(Status.UNBOUNDED, failed.cond, failed.note or f"{failed.cond} fails", tuple(trace))


def _is_open_exponent(p: Exponent) -> bool:
    """1 < p < inf."""
    return p > 1 and not p.is_inf


def _homog_check(ps, q, lam, m, n, cites) -> Check:
    gap = homogeneity_gap(ps, q, lam, m, n)
    return Check("HOMOG", cites, gap == 0,
                 {"sum_recip_p": sum((p.recip for p in ps), Fraction(0)),
                  "rhs": q.recip + Fraction(m * n - lam, n)},
                 "" if gap == 0 else "scaling: homogeneity relation fails")


# ---- classical Riesz potential ----------------------------------------------

def decide_riesz_classic(p, q, lam, n: int) -> Verdict:
    """f -> integral f(y)|x-y|^{-lam} dy is L^p -> L^q bounded iff 1<p<q<inf and 1/p = 1/q + (n-lam)/n."""
    p, q, lam = Exponent.of(p), Exponent.of(q), as_order(lam)
    if not 0 < lam < n:
        raise DomainError(f"need 0 < lambda < n = {n}, got {lam}")
    cites = "classical Riesz potential characterization"
    trace = [
        _homog_check((p,), q, lam, 1, n, cites),
        Check("EXIST-PK", cites, _is_open_exponent(p), {"p": p}, "" if _is_open_exponent(p) else "need 1 < p < inf"),
        Check("MIN-DROP", cites, p < q, {"p": p, "q": q}, "" if p < q else "need p < q"),
        Check("MAX-DROP", cites, not q.is_inf, {"q": q}, "" if not q.is_inf else "need q < inf"),
    ]
    return _verdict(trace)


# ---- J_{lambda, D} -------------------------------------------------------------

_THM_J = "J characterization"


def _j_conditions(m, n, prof: RankProfile, p, q, lam) -> list[Check]:
    trace = [
        Check("TAILRANK", f"{_THM_J} item (i): rank D = n", prof.first == n,
              {"rank_D": prof.first, "n": n, "gamma": list(prof.ranks)},
              "" if prof.first == n else f"rank D = {prof.first} < n"),
        _homog_check(p, q, lam, m, n, f"{_THM_J} item (ii)"),
    ]
    exist = any(_is_open_exponent(x) for x in p)
    above_one = [i for i in range(1, m + 1) if p[i - 1] > 1]
    i0 = max(above_one) if above_one else None
    trace.append(Check("EXIST-PK", f"{_THM_J} item (iii)", exist, {"i_0": i0},
                       "" if exist else "no i with 1 < p_i < inf"))
    drops = prof.drops
    if drops:
        mn = min(p[i - 1] for i in drops)
        ok = mn < q
        trace.append(Check("MIN-DROP", f"{_THM_J} item (iv): min p_(i_l) < q", ok,
                           {"drops": list(drops), "min_p": mn, "q": q},
                           "" if ok else "strict inequality min p_(i_l) < q fails"))
        idx = list(drops) + ([i0] if i0 is not None else [])
        mx = max(p[i - 1] for i in idx)
        ok = mx <= q and not q.is_inf
        trace.append(Check("MAX-DROP", f"{_THM_J} item (iv): max p_(i_l) <= q < inf", ok,
                           {"indices": idx, "max_p": mx, "q": q},
                           "" if ok else "need max(p_(i_0), p_(i_l)) <= q < inf"))
    else:
        trace.append(Check("MIN-DROP", f"{_THM_J} item (iv)", False, {"drops": []},
                           "no rank drops (D = 0)"))
    return trace


def decide_J(prob: ProblemJ) -> Verdict:
    m, n = prob.m, prob.n
    if not 0 < prob.lam < m * n:
        raise DomainError(f"need 0 < lambda < mn = {m * n}, got {prob.lam}")
    prof = rank_profile_J(prob.D)
    trace = _j_conditions(m, n, prof, prob.p, prob.q, prob.lam)
    if prof.first == n:
        assert prof.nu >= 1
    return _verdict(trace)


def decide_J_identity(m: int, n: int, p, q, lam) -> Verdict:
    """D_1 = ... = D_m = I: the two-case corollary condition."""
    p, q, lam = exponent_vector(p, m), Exponent.of(q), as_order(lam)
    if not 0 < lam < m * n:
        raise DomainError(f"need 0 < lambda < mn = {m * n}, got {lam}")
    cites = "identity-stack corollary"
    trace = [_homog_check(p, q, lam, m, n, cites)]
    exist = any(_is_open_exponent(x) for x in p)
    above_one = [i for i in range(1, m + 1) if p[i - 1] > 1]
    i0 = max(above_one) if above_one else None
    trace.append(Check("EXIST-PK", cites, exist, {"i_0": i0}, "" if exist else "no i with 1 < p_i < inf"))
    if i0 is not None:
        if i0 < m:
            ok = p[i0 - 1] <= q and not q.is_inf
            trace.append(Check("MAX-DROP", f"{cites}, case i_0 < m: p_(i_0) <= q < inf", ok,
                               {"i_0": i0, "p_i0": p[i0 - 1], "q": q},
                               "" if ok else "need p_(i_0) <= q < inf"))
        else:
            ok = p[m - 1] < q and not q.is_inf
            trace.append(Check("MIN-DROP", f"{cites}, case i_0 = m: p_m < q < inf", ok,
                               {"i_0": i0, "p_m": p[m - 1], "q": q},
                               "" if ok else "need p_m < q < inf"))
    return _verdict(trace)


# ---- T_lambda -------------------------------------------------------------------

_THM_T = "T characterization (invertible (1,m+1)-minor)"
_THM_M1 = "m=1 characterization"
_THM_N1 = "n=1 characterization"


def _check_domain_T(prob: ProblemT):
    if not 0 < prob.lam < prob.m * prob.n:
        raise DomainError(f"need 0 < lambda < mn = {prob.m * prob.n}, got {prob.lam}")


def _t_homog(prob: ProblemT) -> Check:
    c = _homog_check(prob.p, prob.q, prob.lam, prob.m, prob.n,
                     "dilation necessity (extended from the J case to T)")
    return c


def _q_lt_p1(prob: ProblemT, cites: str) -> Check:
    ok = prob.q < prob.p[0]
    note = "" if ok else "need q < p_1"
    if prob.q.is_inf:
        note = "q = inf: strict q < p_1 cannot hold (boundary interpretation)"
    return Check("Q-LT-P1", cites, ok, {"q": prob.q, "p_1": prob.p[0]}, note)


def _t_m1_conditions(prob: ProblemT) -> list[Check]:
    A = prob.A
    p1, p2, q = prob.p[0], prob.p[1], prob.q
    a_inv = is_invertible(A.base)
    a21 = is_invertible(A.block(2, 1))
    a22 = is_invertible(A.block(2, 2))
    trace = [
        Check("A-INV", f"{_THM_M1}: A invertible", a_inv, {"rank_A": rank(A.base)},
              "" if a_inv else "A is singular"),
        Check("MINOR", f"{_THM_M1}: A_21 invertible", a21, {"rank_A21": rank(A.block(2, 1))},
              "" if a21 else "A_21 is singular"),
        Check("TAILRANK", f"{_THM_M1}: A_22 invertible", a22, {"rank_A22": rank(A.block(2, 2))},
              "" if a22 else "A_22 is singular"),
        Check("EXIST-PK", f"{_THM_M1}: 1 < p_2", p2 > 1, {"p_2": p2}, "" if p2 > 1 else "need p_2 > 1"),
        Check("MIN-DROP", f"{_THM_M1}: p_2 < q", p2 < q, {"p_2": p2, "q": q}, "" if p2 < q else "need p_2 < q"),
        _q_lt_p1(prob, f"{_THM_M1}: q < p_1"),
    ]
    del p1
    return trace


def decide_T_m1(prob: ProblemT) -> Verdict:
    if prob.m != 1:
        raise ValueError("decide_T_m1 needs m = 1")
    _check_domain_T(prob)
    return _verdict([_t_homog(prob)] + _t_m1_conditions(prob))


@dataclass(frozen=True)
class M0Result:
    m0: int
    subset: tuple[int, ...]
    k1: int


def search_m0(A: BlockMatrix) -> M0Result:
    """Largest m~ admitting columns j_1 < ... < j_m~ with the two invertible submatrices.

    Needs n = 1. Candidates are tried by decreasing m~ and, for each, in
    lexicographic order of the column subset; the first hit wins.
    """
    if A.kind != "T" or A.n != 1:
        raise ShapeError("search_m0 needs a kind-T matrix with n = 1")
    m = A.m
    M = A.base
    for mt in range(m, 0, -1):
        tail_rows = list(range(m - mt + 2, m + 2))
        tail = [M[i - 1, m] for i in tail_rows]
        if not any(tail):
            continue
        for cols in combinations(range(1, m + 1), mt):
            small = submatrix(M, tail_rows, list(cols))
            if not is_invertible(small):
                continue
            big = submatrix(M, list(range(m - mt + 1, m + 2)), list(cols) + [m + 1])
            if not is_invertible(big):
                continue
            k1 = max(i for i in tail_rows if M[i - 1, m] != 0)
            return M0Result(mt, cols, k1)
    raise NotFound("no admissible (m~, column subset)")


def _t_n1_conditions(prob: ProblemT) -> list[Check]:
    m, p, q, lam = prob.m, prob.p, prob.q, prob.lam
    a_inv = is_invertible(prob.A.base)
    trace = [Check("A-INV", f"{_THM_N1} item (i)", a_inv, {"rank_A": rank(prob.A.base)},
                   "" if a_inv else "A is singular")]
    if not a_inv:
        return trace
    try:
        res = search_m0(prob.A)
    except NotFound:
        trace.append(Check("M0-SEARCH", f"{_THM_N1} item (ii)", False, {},
                           "no admissible m~ and column subset"))
        return trace
    m0, k1 = res.m0, res.k1
    trace.append(Check("M0-SEARCH", f"{_THM_N1} item (ii)", True,
                       {"m_0": m0, "subset": list(res.subset), "k_1": k1}))
    ks = [k for k in range(m - m0 + 2, m + 2) if p[k - 1] > 1]
    k0 = max(ks) if ks else None
    trace.append(Check("EXIST-PK", f"{_THM_N1} item (iii)", k0 is not None, {"k_0": k0},
                       "" if k0 is not None else f"no k >= {m - m0 + 2} with p_k > 1"))
    shift = sum((conjugate(p[i]).recip for i in range(m - m0)), Fraction(0))
    window = lam - shift
    ok = 0 < window < m0
    trace.append(Check("LAMBDA-WINDOW", f"{_THM_N1} item (iv): 0 < lambda - sum 1/p'_i < m_0", ok,
                       {"lambda_minus_sum": window, "m_0": m0},
                       "" if ok else "lambda window fails"))
    if k0 is not None:
        p_top = p[m - m0]
        a = p[k1 - 1] < q
        b = p[k0 - 1] <= q
        c = q < p_top
        ok = a and b and c
        note = ""
        if not ok:
            parts = [s for s, good in (("p_(k_1) < q", a), ("p_(k_0) <= q", b),
                                       (f"q < p_{m - m0 + 1}", c)) if not good]
            note = "fails: " + ", ".join(parts)
            if q.is_inf and not c:
                note += " (q = inf boundary interpretation)"
        trace.append(Check("N1-INEQ", f"{_THM_N1} item (iv)", ok,
                           {"p_k1": p[k1 - 1], "p_k0": p[k0 - 1], "q": q,
                            "upper_index": m - m0 + 1, "p_upper": p_top}, note))
    return trace


def decide_T_n1(prob: ProblemT) -> Verdict:
    if prob.n != 1:
        raise ValueError("decide_T_n1 needs n = 1")
    if prob.lam <= 0:
        raise DomainError("lambda must be positive")
    return _verdict([_t_homog(prob)] + _t_n1_conditions(prob))


def decide_T(prob: ProblemT) -> Verdict:
    _check_domain_T(prob)
    m, n = prob.m, prob.n
    trace = [_t_homog(prob)]
    if not trace[0].passed:
        return _verdict(trace)
    if m == 1:
        return _verdict(trace + _t_m1_conditions(prob))
    if n == 1:
        return _verdict(trace + _t_n1_conditions(prob))

    A = prob.A
    a_inv = is_invertible(A.base)
    trace.append(Check("A-INV", "invertibility lemma: bounded T forces A invertible", a_inv,
                       {"rank_A": rank(A.base)}, "" if a_inv else "A is singular"))
    if not a_inv:
        return _verdict(trace)
    minor = A.block_range(range(2, m + 2), range(1, m + 1))
    minor_ok = is_invertible(minor)
    minor_check = Check("MINOR", f"{_THM_T}: standing hypothesis", minor_ok, {"rank_minor": rank(minor)},
                        "" if minor_ok else "(1,m+1)-minor singular with m, n >= 2: not characterized")
    trace.append(minor_check)
    if not minor_ok:
        return _verdict(trace, outside=minor_check)

    prof = rank_profile_T(A)
    tail_ok = prof.first == n
    trace.append(Check("TAILRANK", f"{_THM_T} item (i)", tail_ok,
                       {"r": list(prof.ranks), "n": n},
                       "" if tail_ok else f"rank of last block column tail = {prof.first} < n"))
    p = prob.p
    exist = any(_is_open_exponent(p[k - 1]) for k in range(2, m + 2))
    ks = [k for k in range(2, m + 2) if p[k - 1] > 1]
    k0 = max(ks) if ks else None
    trace.append(Check("EXIST-PK", f"{_THM_T} item (ii)", exist, {"k_0": k0},
                       "" if exist else "no k >= 2 with 1 < p_k < inf"))
    if tail_ok:
        assert prof.nu >= 1
    if prof.drops:
        mn_p = min(p[k - 1] for k in prof.drops)
        ok = mn_p < prob.q
        trace.append(Check("MIN-DROP", f"{_THM_T} item (ii): min p_(k_l) < q", ok,
                           {"drops": list(prof.drops), "min_p": mn_p, "q": prob.q},
                           "" if ok else "strict inequality min p_(k_l) < q fails"))
        idx = list(prof.drops) + ([k0] if k0 is not None else [])
        mx = max(p[k - 1] for k in idx)
        ok = mx <= prob.q
        trace.append(Check("MAX-DROP", f"{_THM_T} item (ii): max p_(k_l) <= q", ok,
                           {"indices": idx, "max_p": mx, "q": prob.q},
                           "" if ok else "need max(p_(k_0), p_(k_l)) <= q"))
    else:
        trace.append(Check("MIN-DROP", f"{_THM_T} item (ii)", False, {"drops": []}, "no rank drops"))
    trace.append(_q_lt_p1(prob, f"{_THM_T} item (ii): q < p_1"))
    return _verdict(trace)


def minor_T(A: BlockMatrix) -> RatMatrix:
    """The (1, m+1)-minor (A_{i,j}), 2 <= i <= m+1, 1 <= j <= m."""
    return A.block_range(range(2, A.m + 2), range(1, A.m + 1))


def problem_T(rows: Sequence[Sequence], m: int, n: int, p, q, lam) -> ProblemT:
    return ProblemT(m, n, BlockMatrix.from_rows(m, n, "T", rows), p, q, lam)


def problem_J(rows: Sequence[Sequence], m: int, n: int, p, q, lam) -> ProblemJ:
    return ProblemJ(m, n, BlockMatrix.from_rows(m, n, "J", rows), p, q, lam)


__all__ = [
    "Check", "DomainError", "M0Result", "NotFound", "ProblemJ", "ProblemT", "Status", "Verdict",
    "decide_J", "decide_J_identity", "decide_T", "decide_T_m1", "decide_T_n1", "decide_riesz_classic",
    "minor_T", "problem_J", "problem_T", "search_m0", "INF",
]
