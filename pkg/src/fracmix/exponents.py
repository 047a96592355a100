"""Extended Lebesgue exponents in [1, inf] with exact rational arithmetic."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_INF_WORDS = {"inf", "infinity", "∞"}


class ExponentError(ValueError):
    """Raised for malformed or out-of-range exponent input."""


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"k"``. Decimal strings and floats are rejected."""
    if isinstance(text, bool):
        raise ExponentError(f"not a rational: {text!r}")
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ExponentError(f"expected a rational string, got {type(text).__name__}")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ExponentError(f"not an exact rational: {text!r} (use 'p/q' or an integer)")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ExponentError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


@total_ordering
@dataclass(frozen=True)
class Exponent:
    """A Lebesgue exponent: an exact rational >= 1, or infinity (``value is None``)."""

    value: Fraction | None

    def __post_init__(self):
        if self.value is None:
            return
        if not isinstance(self.value, Fraction):
            if isinstance(self.value, int) and not isinstance(self.value, bool):
                object.__setattr__(self, "value", Fraction(self.value))
            else:
                raise ExponentError(f"exponent must be a Fraction, got {self.value!r}")
        if self.value < 1:
            raise ExponentError(f"exponent must be >= 1, got {self.value}")

    @classmethod
    def inf(cls) -> "Exponent":
        return cls(None)

    @classmethod
    def of(cls, x: "Exponent | str | int | Fraction") -> "Exponent":
        if isinstance(x, Exponent):
            return x
        if isinstance(x, str) and x.strip().lower() in _INF_WORDS:
            return cls(None)
        return cls(parse_rational(x))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    @property
    def recip(self) -> Fraction:
        """1/p with 1/inf = 0."""
        return Fraction(0) if self.value is None else 1 / self.value

    def _key(self):
        return (1, Fraction(0)) if self.value is None else (0, self.value)

    def __lt__(self, other):
        key = _key_of(other)
        if key is NotImplemented:
            return NotImplemented
        return self._key() < key

    def __eq__(self, other):
        key = _key_of(other)
        if key is NotImplemented:
            return NotImplemented
        return self._key() == key

    def __hash__(self):
        return hash(("Exponent", self.value))

    def __float__(self):
        return float("inf") if self.value is None else float(self.value)

    def __str__(self):
        if self.value is None:
            return "inf"
        return str(self.value)

    def __repr__(self):
        return f"Exponent({self})"


def _key_of(x):
    if isinstance(x, Exponent):
        return x._key()
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return (0, Fraction(x))
    return NotImplemented


INF = Exponent.inf()
ONE = Exponent(Fraction(1))


def conjugate(p: Exponent) -> Exponent:
    """Hölder conjugate p' with 1/p + 1/p' = 1."""
    p = Exponent.of(p)
    if p.value is None:
        return ONE
    if p.value == 1:
        return INF
    return Exponent(p.value / (p.value - 1))


def reciprocal_sum(ps: Iterable[Exponent]) -> Fraction:
    return sum((Exponent.of(p).recip for p in ps), Fraction(0))


def homogeneity_gap(ps: Sequence[Exponent], q: Exponent, lam: Fraction, m: int, n: int) -> Fraction:
    """sum 1/p_i - 1/q - (mn - lam)/n; zero exactly when the scaling balance holds."""
    return reciprocal_sum(ps) - Exponent.of(q).recip - Fraction(m * n - lam, n)


def check_homogeneity(ps: Sequence[Exponent], q: Exponent, lam: Fraction, m: int, n: int, kind: str) -> bool:
    """Exact test of sum 1/p_i = 1/q + (mn - lam)/n.

    ``kind`` is ``"T"`` (m+1 exponents) or ``"J"`` (m exponents).
    """
    expected = m + 1 if kind == "T" else m
    if kind not in ("T", "J"):
        raise ValueError(f"kind must be 'T' or 'J', got {kind!r}")
    if len(ps) != expected:
        raise ValueError(f"kind {kind} with m={m} needs {expected} exponents, got {len(ps)}")
    return homogeneity_gap(ps, q, as_order(lam), m, n) == 0


def derive_q(ps: Sequence[Exponent], lam: Fraction, m: int, n: int) -> Exponent | None:
    """Solve the homogeneity relation for q; None when the solution is not an exponent >= 1."""
    inv_q = reciprocal_sum(ps) - Fraction(m * n - as_order(lam), n)
    if inv_q < 0 or inv_q > 1:
        return None
    if inv_q == 0:
        return INF
    return Exponent(1 / inv_q)


def as_order(lam) -> Fraction:
    """Validate a kernel order: an exact positive rational."""
    if isinstance(lam, str):
        lam = parse_rational(lam)
    elif isinstance(lam, int) and not isinstance(lam, bool):
        lam = Fraction(lam)
    if not isinstance(lam, Fraction):
        raise ExponentError(f"order must be an exact rational, got {lam!r}")
    if lam <= 0:
        raise ExponentError(f"order must be positive, got {lam}")
    return lam


def exponent_vector(items: Iterable, length: int | None = None) -> tuple[Exponent, ...]:
    vec = tuple(Exponent.of(x) for x in items)
    if length is not None and len(vec) != length:
        raise ExponentError(f"expected {length} exponents, got {len(vec)}")
    if not vec:
        raise ExponentError("exponent vector must be non-empty")
    return vec
