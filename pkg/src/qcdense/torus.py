"""
Exact arithmetic in the circle group T = R/Z.

Only rational points are representable. Every value is stored through its
canonical representative in the half-open interval (-1/2, 1/2].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def parse_rational(text) -> Fraction:
    """Parse "a/b" or "a" into a Fraction. Floats are refused."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError("not an exact rational: %r" % (text,))
    return Fraction(s)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


@dataclass(frozen=True, order=True)
class TorusValue:
    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError("denominator must be positive")
        q = Fraction(self.num, self.den)
        if (q.numerator, q.denominator) != (self.num, self.den) or not (
            -self.den < 2 * self.num <= self.den
        ):
            raise ValueError("not a canonical torus value: %d/%d" % (self.num, self.den))

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __abs__(self) -> Fraction:
        return abs(self.value)

    def __add__(self, other: "TorusValue") -> "TorusValue":
        return add(self, other)

    def __neg__(self) -> "TorusValue":
        return neg(self)

    def __sub__(self, other: "TorusValue") -> "TorusValue":
        return add(self, neg(other))

    def __rmul__(self, m: int) -> "TorusValue":
        return scale(m, self)

    def __bool__(self):
        return self.num != 0

    def __str__(self):
        return format_rational(self.value)

    def __repr__(self):
        return "TorusValue(%s)" % self


ZERO = TorusValue(0, 1)


def canonicalize(q) -> TorusValue:
    """Reduce a rational mod 1 into (-1/2, 1/2]."""
    q = parse_rational(q) if not isinstance(q, Fraction) else q
    r = q - floor(q)  # [0, 1)
    if r > HALF:
        r -= 1
    return TorusValue(r.numerator, r.denominator)


def add(a: TorusValue, b: TorusValue) -> TorusValue:
    return canonicalize(a.value + b.value)


def neg(a: TorusValue) -> TorusValue:
    return canonicalize(-a.value)


def scale(m: int, a: TorusValue) -> TorusValue:
    return canonicalize(m * a.value)


def in_t_plus(a: TorusValue) -> bool:
    # closed arc: both endpoints +-1/4 belong to T_+
    return 4 * abs(a.num) <= a.den


@dataclass(frozen=True)
class OpenArc:
    """The open symmetric arc (-radius, radius) around 0."""

    radius: Fraction

    def __post_init__(self):
        r = parse_rational(self.radius)
        if not (0 < r <= HALF):
            raise ValueError("arc radius must lie in (0, 1/2], got %s" % r)
        object.__setattr__(self, "radius", r)

    def __contains__(self, a: TorusValue) -> bool:
        return in_arc(a, self)

    def __str__(self):
        return format_rational(self.radius)


def in_arc(a: TorusValue, U: OpenArc) -> bool:
    return abs(a.value) < U.radius


def in_v_n(a: TorusValue, n: int) -> bool:
    """True iff k*a lies in T_+ for every k = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return all(in_t_plus(scale(k, a)) for k in range(1, n + 1))


def min_n_with_v_n_inside(U: OpenArc) -> int:
    """Least n such that V_n is contained in the open arc U.

    V_1 = [-1/4, 1/4] and V_n = [-1/(4n), 1/(4n)] for n >= 2, so the answer is
    1 when radius > 1/4 and otherwise the least n >= 2 with 4*n*radius > 1.
    """
    r = U.radius
    if r > QUARTER:
        return 1
    return max(2, floor(1 / (4 * r)) + 1)
