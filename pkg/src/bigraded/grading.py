"""Bidegree arithmetic, slope calculus, vanishing lines and range statements.

A bidegree is a lattice point (g, d) with genus grading g and homological
degree d.  Its slope is the exact rational d/g, defined for g >= 1 only: the
results tracked by this package never take slopes of genus-zero classes, and
an exact-arithmetic sentinel for "infinity" would poison downstream algebra,
so genus zero is a domain error.

Everything is a frozen value; all arithmetic is exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InputError
from .exactla import normalize_triple


@dataclass(frozen=True, order=True)
class Bidegree:
    g: int
    d: int

    def __post_init__(self):
        if self.g < 0 or self.d < 0:
            raise DomainError(f"bidegree entries must be nonnegative: {(self.g, self.d)}")

    def as_tuple(self) -> tuple[int, int]:
        return (self.g, self.d)


def slope(bd: Bidegree | tuple[int, int]) -> Fraction:
    """The slope d/g of a bidegree, in lowest terms.  Requires g >= 1."""
    g, d = bd if isinstance(bd, tuple) else bd.as_tuple()
    if g < 1:
        raise DomainError("slope is undefined at genus zero")
    return Fraction(d, g)


@dataclass(frozen=True)
class VanishingLine:
    """The predicate "vanishes for d < lam * (g - c)", lam and c exact rationals."""

    lam: Fraction
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError("vanishing-line slope must be positive")

    def strictly_below(self, bd: Bidegree | tuple[int, int]) -> bool:
        g, d = bd if isinstance(bd, tuple) else bd.as_tuple()
        return d < self.lam * (g - self.c)

    def render(self) -> str:
        if self.c == 0:
            return f"d < {_frac(self.lam)}*g"
        return f"d < {_frac(self.lam)}*(g - {_frac(self.c)})"


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


KINDS = ("epimorphism", "isomorphism", "vanishing")


@dataclass(frozen=True)
class RangeStatement:
    """A stability-range inequality "holds for a*d <= b*g + e", gcd-normalized."""

    kind: str
    a: int
    b: int
    e: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown range kind: {self.kind}")
        if self.a < 1:
            raise DomainError("range statement needs a >= 1")

    def satisfies(self, bd: Bidegree | tuple[int, int]) -> bool:
        g, d = bd if isinstance(bd, tuple) else bd.as_tuple()
        return self.a * d <= self.b * g + self.e

    def render(self) -> str:
        lhs = "d" if self.a == 1 else f"{self.a}d"
        rhs = "g" if self.b == 1 else f"{self.b}g"
        if self.e > 0:
            rhs += f"+{self.e}"
        elif self.e < 0:
            rhs += f"-{-self.e}"
        return f"{lhs} ≤ {rhs}"


def range_statement(kind: str, a: int, b: int, e: int) -> RangeStatement:
    """Build a gcd-normalized range statement."""
    a2, b2, e2 = normalize_triple(a, b, e)
    if a2 < 0:
        a2, b2, e2 = -a2, -b2, -e2
    return RangeStatement(kind, a2, b2, e2)


_RANGE_RE = re.compile(
    r"^\s*(?:(\d+)\s*)?d\s*(?:≤|<=)\s*(?:(\d+)\s*)?g\s*(?:([+-])\s*(\d+))?\s*$"
)


def parse_range(text: str, kind: str = "vanishing") -> RangeStatement:
    """Parse a rendering like "3d <= 2g-1" back to the normalized triple."""
    m = _RANGE_RE.match(text)
    if not m:
        raise InputError(f"cannot parse range statement: {text!r}")
    a = int(m.group(1) or 1)
    b = int(m.group(2) or 1)
    e = 0
    if m.group(3):
        e = int(m.group(4))
        if m.group(3) == "-":
            e = -e
    return range_statement(kind, a, b, e)


def bidegrees_between(high_slope: Fraction, g_max: int) -> list[Bidegree]:
    """All (g, d) with 1 <= g <= g_max, d >= g-1, and d/g <= high_slope.

    Sorted lexicographically.  The paper-facing use is the finite list of
    bidegrees trapped between the connectivity line d >= g-1 and a slope
    bound; for high_slope < 1 the two constraints force g <= 1/(1-high_slope)
    (see auto_g_bound), so a finite g_max loses nothing.
    """
    if high_slope < 0:
        raise DomainError("high_slope must be nonnegative")
    if g_max < 1:
        raise DomainError("g_max must be >= 1")
    out = []
    for g in range(1, g_max + 1):
        d = max(0, g - 1)
        while Fraction(d, g) <= high_slope:
            out.append(Bidegree(g, d))
            d += 1
    return out


def auto_g_bound(high_slope: Fraction) -> int:
    """Finiteness bound: d >= g-1 and d/g <= s imply g*(1-s) <= 1."""
    if high_slope >= 1:
        raise DomainError("no finite bound for slope >= 1")
    return int(Fraction(1, 1 - high_slope))
