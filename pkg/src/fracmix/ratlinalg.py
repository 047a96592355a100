"""Exact rational matrices with (m, n) block structure.

All arithmetic is over :class:`fractions.Fraction`; there is no tolerance
anywhere. Rank and determinant use fraction-free (Bareiss) elimination on an
integer copy of the matrix; inversion uses Gauss-Jordan with rational pivots.
Block indices are 1-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exponents import parse_rational


class SingularMatrix(ArithmeticError):
    pass


class IndexOutOfRange(IndexError):
    pass


class ShapeError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"matrix entries must be exact rationals, got {x!r}")


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(f"{len(self.entries)} entries for shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged matrix literal")
        return cls(len(rows), width, tuple(_frac(x) for r in rows for x in r))

    @classmethod
    def identity(cls, size: int) -> "RatMatrix":
        return cls(size, size, tuple(Fraction(int(i == j)) for i in range(size) for j in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        ocols = [other.entries[j::other.cols] for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            for col in ocols:
                out.append(sum((a * b for a, b in zip(r, col) if a and b), Fraction(0)))
        return RatMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in addition")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in subtraction")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in self.row(i)] for i in range(self.rows)]

    def to_float(self):
        import numpy as np
        return np.array([[float(x) for x in self.row(i)] for i in range(self.rows)], dtype=float)


def vstack(blocks: Iterable[RatMatrix]) -> RatMatrix:
    blocks = list(blocks)
    if not blocks:
        raise ShapeError("nothing to stack")
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ShapeError("vstack: column counts differ")
    return RatMatrix(sum(b.rows for b in blocks), cols, tuple(x for b in blocks for x in b.entries))


def hstack(blocks: Iterable[RatMatrix]) -> RatMatrix:
    blocks = list(blocks)
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ShapeError("hstack: row counts differ")
    out = []
    for i in range(rows):
        for b in blocks:
            out.extend(b.row(i))
    return RatMatrix(rows, sum(b.cols for b in blocks), tuple(out))


def _integer_rows(M: RatMatrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; rank is unchanged."""
    out = []
    for i in range(M.rows):
        r = M.row(i)
        scale = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * scale) for x in r])
    return out


def _bareiss(a: list[list[int]]) -> tuple[int, int]:
    """In-place fraction-free elimination. Returns (rank, sign * last pivot).

    Every division is exact (Sylvester's identity), so intermediate entries
    are minors of the input and stay integers.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        pr = a[r]
        for i in range(r + 1, rows):
            ai = a[i]
            lead = ai[c]
            for j in range(c + 1, cols):
                ai[j] = (pr[c] * ai[j] - lead * pr[j]) // prev
            ai[c] = 0
        prev = pr[c]
        r += 1
    return r, sign * prev


def rank(M: RatMatrix) -> int:
    """Exact rank over Q."""
    if M.rows == 0 or M.cols == 0:
        return 0
    r, _ = _bareiss(_integer_rows(M))
    return r


def det(M: RatMatrix) -> Fraction:
    if M.rows != M.cols:
        raise ShapeError("determinant of a non-square matrix")
    if M.rows == 0:
        return Fraction(1)
    scales = 1
    for i in range(M.rows):
        r = M.row(i)
        scales *= lcm(*(x.denominator for x in r))
    r, last = _bareiss(_integer_rows(M))
    if r < M.rows:
        return Fraction(0)
    return Fraction(last, scales)


def is_invertible(M: RatMatrix) -> bool:
    return M.rows == M.cols and rank(M) == M.rows


def inverse(M: RatMatrix) -> RatMatrix:
    """Exact inverse by Gauss-Jordan elimination; raises SingularMatrix."""
    if M.rows != M.cols:
        raise ShapeError(f"inverse of non-square {M.shape} matrix")
    size = M.rows
    work = [list(M.row(i)) + [Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    for c in range(size):
        piv = next((i for i in range(c, size) if work[i][c] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular (rank {rank(M)} < {size})")
        work[c], work[piv] = work[piv], work[c]
        pr = work[c]
        inv_p = 1 / pr[c]
        for j in range(c, 2 * size):
            pr[j] *= inv_p
        for i in range(size):
            if i == c:
                continue
            ri = work[i]
            f = ri[c]
            if f:
                for j in range(c, 2 * size):
                    ri[j] -= f * pr[j]
    return RatMatrix(size, size, tuple(x for r in work for x in r[size:]))


def solve_row_combination(target: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> list[Fraction] | None:
    """Coefficients c with sum c_k basis[k] == target, or None if target is outside the span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    if k == 0:
        return [] if not any(target) else None
    width = len(target)
    # columns are basis vectors: solve B^T c = target by elimination on the augmented system
    aug = [[basis[j][i] for j in range(k)] + [target[i]] for i in range(width)]
    r = 0
    pivots = []
    for c in range(k):
        piv = next((i for i in range(r, width) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv_p = 1 / aug[r][c]
        aug[r] = [x * inv_p for x in aug[r]]
        for i in range(width):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, width)):
        return None
    coef = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        coef[c] = aug[i][k]
    return coef


def submatrix(M: RatMatrix, rowset: Sequence[int], colset: Sequence[int]) -> RatMatrix:
    """Rows and columns selected by strictly increasing 1-based index lists."""
    for name, idx, bound in (("row", rowset, M.rows), ("column", colset, M.cols)):
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise IndexOutOfRange(f"{name} indices must be strictly increasing: {list(idx)}")
        if idx and (idx[0] < 1 or idx[-1] > bound):
            raise IndexOutOfRange(f"{name} index out of range 1..{bound}: {list(idx)}")
    return RatMatrix(len(rowset), len(colset),
                     tuple(M[i - 1, j - 1] for i in rowset for j in colset))


def _span(start: int, count: int) -> list[int]:
    return list(range(start, start + count))


@dataclass(frozen=True)
class BlockMatrix:
    """A matrix with n x n blocks.

    kind ``"T"``: (m+1)n x (m+1)n, blocks A_{i,j} for 1 <= i, j <= m+1.
    kind ``"J"``: mn x n, the stack D = (D_1; ...; D_m).
    """

    m: int
    n: int
    kind: str
    base: RatMatrix

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ShapeError("m and n must be positive")
        if self.kind == "T":
            want = ((self.m + 1) * self.n, (self.m + 1) * self.n)
        elif self.kind == "J":
            want = (self.m * self.n, self.n)
        else:
            raise ShapeError(f"unknown block kind {self.kind!r}")
        if self.base.shape != want:
            raise ShapeError(f"kind {self.kind} with m={self.m}, n={self.n} needs shape "
                             f"{want[0]}x{want[1]}, got {self.base.rows}x{self.base.cols}")

    @classmethod
    def from_rows(cls, m: int, n: int, kind: str, rows) -> "BlockMatrix":
        return cls(m, n, kind, RatMatrix.from_rows(rows))

    @property
    def block_rows(self) -> int:
        return self.base.rows // self.n

    @property
    def block_cols(self) -> int:
        return self.base.cols // self.n

    def block(self, i: int, j: int = 1) -> RatMatrix:
        if not (1 <= i <= self.block_rows and 1 <= j <= self.block_cols):
            raise IndexOutOfRange(f"block ({i},{j}) outside {self.block_rows}x{self.block_cols} grid")
        n = self.n
        return submatrix(self.base, _span((i - 1) * n + 1, n), _span((j - 1) * n + 1, n))

    def block_range(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        """Submatrix made of whole blocks, rows/cols given as 1-based block indices."""
        n = self.n
        ri = [(i - 1) * n + t for i in rows for t in range(1, n + 1)]
        ci = [(j - 1) * n + t for j in cols for t in range(1, n + 1)]
        return submatrix(self.base, ri, ci)

    def d_block(self, i: int) -> RatMatrix:
        return self.block(i, 1)


def schur_identity_check(A: RatMatrix, n1: int, n2: int) -> bool:
    """Check the block-inverse lemma on one instance.

    A = [[A1, A2], [A3, A4]] with A1: n1 x n2, A2: n1 x n1, A3: n2 x n2,
    A4: n2 x n1, and A^{-1} = [[B1, B2], [B3, B4]] with B1: n2 x n1,
    B2: n2 x n2, B3: n1 x n1, B4: n1 x n2. True iff A3 and B3 are
    invertible together and, when B3 is invertible,
    (B2 - B1 B3^{-1} B4)^{-1} B1 B3^{-1} == -A4.
    """
    if A.shape != (n1 + n2, n1 + n2):
        raise ShapeError(f"expected {n1 + n2}x{n1 + n2}, got {A.rows}x{A.cols}")
    Ainv = inverse(A)
    bot = _span(n1 + 1, n2)
    A3 = submatrix(A, bot, _span(1, n2))
    A4 = submatrix(A, bot, _span(n2 + 1, n1))
    B1 = submatrix(Ainv, _span(1, n2), _span(1, n1))
    B2 = submatrix(Ainv, _span(1, n2), _span(n1 + 1, n2))
    B3 = submatrix(Ainv, _span(n2 + 1, n1), _span(1, n1))
    B4 = submatrix(Ainv, _span(n2 + 1, n1), _span(n1 + 1, n2))
    a3_inv, b3_inv = is_invertible(A3), is_invertible(B3)
    if a3_inv != b3_inv:
        return False
    if not b3_inv:
        return True
    B3i = inverse(B3)
    S = B2 - B1 @ B3i @ B4
    if not is_invertible(S):
        return False
    return inverse(S) @ B1 @ B3i == -A4


def corner_rank_equiv_check(A: BlockMatrix) -> bool:
    """rank of the leading mn x mn corner of A^{-1} is mn  <=>  rank A_{m+1,m+1} = n."""
    if A.kind != "T":
        raise ShapeError("corner_rank_equiv_check needs a kind-T block matrix")
    m, n = A.m, A.n
    Ainv = inverse(A.base)
    corner = submatrix(Ainv, _span(1, m * n), _span(1, m * n))
    return (rank(corner) == m * n) == (rank(A.block(m + 1, m + 1)) == n)


# ---- seeded random generators ---------------------------------------------

def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9,
                  zero_prob: float = 0.0) -> RatMatrix:
    out = []
    for _ in range(rows * cols):
        if zero_prob and rng.random() < zero_prob:
            out.append(Fraction(0))
        else:
            out.append(random_rational(rng, bound))
    return RatMatrix(rows, cols, tuple(out))


def random_invertible(rng: random.Random, size: int, bound: int = 9, zero_prob: float = 0.0,
                      max_tries: int = 1000) -> RatMatrix:
    for _ in range(max_tries):
        M = random_matrix(rng, size, size, bound, zero_prob)
        if is_invertible(M):
            return M
    raise RuntimeError(f"no invertible {size}x{size} sample in {max_tries} tries")
