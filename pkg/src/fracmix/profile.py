"""Rank profiles of the kernel matrices, pivot index sets and the canonical form of |Dx - y|."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ratlinalg import BlockMatrix, RatMatrix, ShapeError, rank, solve_row_combination, vstack


class NotFullRank(ValueError):
    pass


@dataclass(frozen=True)
class RankProfile:
    """Ranks of stacked tail blocks and the positions where they drop.

    For kind T, ``ranks`` holds r_2, ..., r_{m+2} and ``start`` is 2; for
    kind J it holds gamma_1, ..., gamma_{m+1} and ``start`` is 1. The last
    entry is always 0. ``drops`` are the labels k with rank(k) > rank(k+1).
    """

    kind: str
    n: int
    start: int
    ranks: tuple[int, ...]
    drops: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if not self.ranks or self.ranks[-1] != 0:
            raise ValueError("rank sequence must end in 0")
        if any(a < b for a, b in zip(self.ranks, self.ranks[1:])):
            raise ValueError(f"rank sequence must be non-increasing: {self.ranks}")
        drops = tuple(self.start + i for i in range(len(self.ranks) - 1)
                      if self.ranks[i] > self.ranks[i + 1])
        object.__setattr__(self, "drops", drops)

    @property
    def nu(self) -> int:
        return len(self.drops)

    @property
    def first(self) -> int:
        return self.ranks[0]

    def rank_at(self, label: int) -> int:
        return self.ranks[label - self.start]

    def drop_size(self, label: int) -> int:
        return self.rank_at(label) - self.rank_at(label + 1)

    def labels(self) -> dict[int, int]:
        return {self.start + i: r for i, r in enumerate(self.ranks)}


def rank_profile_T(A: BlockMatrix) -> RankProfile:
    """r_k = rank of (A_{k,m+1}; ...; A_{m+1,m+1}) for k = 2..m+1, and r_{m+2} = 0."""
    if A.kind != "T":
        raise ShapeError("rank_profile_T needs a kind-T block matrix")
    m = A.m
    ranks = [rank(A.block_range(range(k, m + 2), [m + 1])) for k in range(2, m + 2)]
    return RankProfile("T", A.n, 2, tuple(ranks) + (0,))


def rank_profile_J(D: BlockMatrix) -> RankProfile:
    """gamma_i = rank of (D_i; ...; D_m) for i = 1..m, and gamma_{m+1} = 0."""
    if D.kind != "J":
        raise ShapeError("rank_profile_J needs a kind-J block matrix")
    m = D.m
    ranks = [rank(vstack(D.d_block(j) for j in range(i, m + 1))) for i in range(1, m + 1)]
    return RankProfile("J", D.n, 1, tuple(ranks) + (0,))


def pivot_index_set(profile: RankProfile) -> tuple[tuple[int, int], ...]:
    """Union over drops i_s of {(i_s, t): n+1-(drop size) <= t <= n}, sorted."""
    n = profile.n
    if profile.first != n:
        raise NotFullRank(f"leading rank {profile.first} < n = {n}")
    pairs = [(i, t) for i in profile.drops for t in range(n + 1 - profile.drop_size(i), n + 1)]
    return tuple(sorted(pairs))


@dataclass(frozen=True)
class CanonicalForm:
    """Row reduction P (D, -I) = (PD, U) certifying the structure of |Dx - y|.

    ``selected`` maps block index (1-based) to the 1-based rows of that block
    kept in the independent set; ``P`` is unit upper triangular so that PD is
    nonzero exactly on the selected rows and U = -P.
    """

    m: int
    n: int
    selected: dict[int, tuple[int, ...]]
    P: RatMatrix
    PD: RatMatrix
    U: RatMatrix

    @property
    def selected_global(self) -> tuple[int, ...]:
        """0-based row indices into the mn-row stack."""
        return tuple((i - 1) * self.n + (r - 1) for i in sorted(self.selected) for r in self.selected[i])

    @property
    def G(self) -> RatMatrix:
        return RatMatrix.from_rows([self.PD.row(k) for k in self.selected_global])

    def certificate(self) -> dict:
        return {
            "zero_rows_of_PD": [k + 1 for k in range(self.PD.rows) if k not in set(self.selected_global)],
            "nonzero_rows_of_PD": [k + 1 for k in self.selected_global],
            "U_unit_upper_triangular_minus_one_diagonal": _is_minus_unit_upper(self.U),
            "rank_G": rank(self.G),
        }


def _is_minus_unit_upper(U: RatMatrix) -> bool:
    return all(U[i, j] == (-1 if i == j else U[i, j]) and (j >= i or U[i, j] == 0)
               for i in range(U.rows) for j in range(U.cols))


def reduce_kernel(D: BlockMatrix) -> CanonicalForm:
    """Greedy independent row selection and the elimination matrix P.

    Blocks are scanned from m down to 1 and, inside a block, rows from the
    highest index down, keeping a row iff it is independent of the rows kept
    so far. Every discarded row is then a combination of kept rows with larger
    global index, which is what makes P upper triangular.
    """
    if D.kind != "J":
        raise ShapeError("reduce_kernel needs a kind-J block matrix")
    m, n = D.m, D.n
    total = m * n
    if rank(D.base) != n:
        raise NotFullRank(f"rank(D) = {rank(D.base)} != n = {n}")

    kept: list[int] = []
    for i in range(m, 0, -1):
        for r in range(n, 0, -1):
            g = (i - 1) * n + (r - 1)
            trial = [D.base.row(k) for k in kept + [g]]
            if rank(RatMatrix.from_rows(trial)) == len(trial):
                kept.append(g)
    kept_set = set(kept)

    P_rows = []
    for g in range(total):
        row = [Fraction(0)] * total
        row[g] = Fraction(1)
        if g not in kept_set:
            basis_idx = [k for k in kept if k > g]
            coef = solve_row_combination(D.base.row(g), [D.base.row(k) for k in basis_idx])
            if coef is None:
                raise AssertionError(f"row {g + 1} not spanned by later kept rows")
            for k, c in zip(basis_idx, coef):
                row[k] -= c
        P_rows.append(row)
    P = RatMatrix.from_rows(P_rows)
    PD = P @ D.base
    U = -P

    selected = {i: tuple(sorted(r for r in range(1, n + 1) if (i - 1) * n + r - 1 in kept_set))
                for i in range(1, m + 1)}
    form = CanonicalForm(m, n, selected, P, PD, U)
    _verify(form, D)
    return form


def _verify(form: CanonicalForm, D: BlockMatrix) -> None:
    sel = set(form.selected_global)
    for k in range(form.PD.rows):
        nonzero = any(form.PD.row(k))
        if nonzero != (k in sel):
            raise AssertionError(f"PD row {k + 1}: nonzero={nonzero}, selected={k in sel}")
    if not _is_minus_unit_upper(form.U):
        raise AssertionError("U is not upper triangular with -1 diagonal")
    if rank(form.G) != form.n:
        raise AssertionError("selected rows are not independent")
    prof = rank_profile_J(D)
    for i in range(1, form.m + 1):
        if len(form.selected[i]) != prof.drop_size(i):
            raise AssertionError(f"block {i}: {len(form.selected[i])} rows kept, "
                                 f"expected {prof.drop_size(i)}")
