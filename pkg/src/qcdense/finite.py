"""
Finite abelian groups as explicit products of cyclic groups.

Elements and characters are plain tuples of residues. A finite abelian group
is self-dual, so a character has the same shape as an element and pairs with
it through sum_i chi_i * x_i / n_i (mod 1).
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, prod
from typing import Iterable, Iterator

from .torus import TorusValue, canonicalize

DEFAULT_CAP = 10**6


class EnumerationCapExceeded(RuntimeError):
    pass


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAbelianGroup:
    orders: tuple
    cap: int = field(default=DEFAULT_CAP, compare=False)

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders or any(n < 1 for n in orders):
            raise ValueError("orders must be a nonempty list of integers >= 1")
        object.__setattr__(self, "orders", orders)

    # basic data ---------------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders)

    @property
    def zero(self) -> tuple:
        return (0,) * self.rank

    zero_character = zero
    is_finite = True

    def __str__(self):
        return "x".join("Z%d" % n for n in self.orders)

    def element(self, coords: Iterable[int]) -> tuple:
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise ShapeMismatch("expected %d coordinates, got %r" % (self.rank, coords))
        return tuple(c % n for c, n in zip(coords, self.orders))

    character = element

    def contains(self, x) -> bool:
        return len(x) == self.rank and all(0 <= c < n for c, n in zip(x, self.orders))

    # group law -----------------------------------------------------------

    def add(self, x, y) -> tuple:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def neg(self, x) -> tuple:
        return tuple(-a % n for a, n in zip(x, self.orders))

    def mul(self, k: int, x) -> tuple:
        return tuple(k * a % n for a, n in zip(x, self.orders))

    def element_order(self, x) -> int:
        return lcm(*(n // gcd(a, n) for a, n in zip(x, self.orders)))

    # pairing -------------------------------------------------------------

    def pairing_numerator(self, chi, x) -> int:
        """Numerator v of the pairing value v/exponent, reduced into [0, exponent)."""
        L = self.exponent
        return sum(c * a * (L // n) for c, a, n in zip(chi, x, self.orders)) % L

    def pairing(self, chi, x) -> TorusValue:
        if len(chi) != self.rank or len(x) != self.rank:
            raise ShapeMismatch("character/element shape does not match %s" % self)
        return canonicalize(
            sum(Fraction(c * a, n) for c, a, n in zip(chi, x, self.orders))
        )

    # enumeration ---------------------------------------------------------

    def _check_cap(self):
        if self.order > self.cap:
            raise EnumerationCapExceeded(
                "group %s has order %d > enumeration cap %d" % (self, self.order, self.cap)
            )

    def elements(self) -> Iterator[tuple]:
        self._check_cap()
        return itertools.product(*(range(n) for n in self.orders))

    def characters(self, bound=None) -> Iterator[tuple]:
        return self.elements()


def enumerate_elements(G: FiniteAbelianGroup):
    return G.elements()


def enumerate_characters(G: FiniteAbelianGroup):
    return G.characters()


def pairing(G: FiniteAbelianGroup, chi, x) -> TorusValue:
    return G.pairing(chi, x)


def direct_product(*groups: FiniteAbelianGroup) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(n for g in groups for n in g.orders))


def generated_subgroup(G: FiniteAbelianGroup, S: Iterable) -> frozenset:
    """Closure of S u {0} under addition (enough for finite groups)."""
    gens = [G.element(s) for s in S]
    seen = {G.zero}
    frontier = [G.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > G.cap:
                        raise EnumerationCapExceeded("generated subgroup exceeds cap")
        frontier = nxt
    return frozenset(seen)


def is_subgroup(G: FiniteAbelianGroup, D: Iterable) -> bool:
    D = set(D)
    if G.zero not in D:
        return False
    return all(G.add(x, G.neg(y)) in D for x in D for y in D)


def cyclic_subgroups_of_cyclic(n: int) -> list:
    """All subgroups of Z(n), one per divisor d of n (generated by d)."""
    G = FiniteAbelianGroup((n,))
    return [generated_subgroup(G, [(d,)]) for d in range(1, n + 1) if n % d == 0]


# homomorphisms -------------------------------------------------------------


class IllDefinedHomomorphism(ValueError):
    pass


@dataclass(frozen=True)
class Homomorphism:
    """Integer matrix with rows indexed by target factors, columns by source factors."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(int(v) for v in row) for row in self.matrix)
        if len(M) != self.target.rank or any(len(row) != self.source.rank for row in M):
            raise ShapeMismatch(
                "matrix must be %d x %d" % (self.target.rank, self.source.rank)
            )
        # column i is the image of the i-th generator; its order must divide source.orders[i]
        for i, n in enumerate(self.source.orders):
            col = tuple(M[j][i] for j in range(self.target.rank))
            if self.target.mul(n, col) != self.target.zero:
                raise IllDefinedHomomorphism(
                    "image of generator %d has order %d, which does not divide %d"
                    % (i, self.target.element_order(self.target.element(col)), n)
                )
        object.__setattr__(self, "matrix", M)

    def __call__(self, x) -> tuple:
        return apply(self, x)

    def to_json(self) -> str:
        return json.dumps(
            {"source": str(self.source), "target": str(self.target), "matrix": [list(r) for r in self.matrix]}
        )


def identity_hom(G: FiniteAbelianGroup) -> Homomorphism:
    r = G.rank
    return Homomorphism(G, G, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))


def apply(f: Homomorphism, x) -> tuple:
    return f.target.element(
        sum(row[i] * x[i] for i in range(f.source.rank)) for row in f.matrix
    )


def kernel(f: Homomorphism) -> frozenset:
    zero = f.target.zero
    return frozenset(x for x in f.source.elements() if apply(f, x) == zero)


def image(f: Homomorphism) -> frozenset:
    return frozenset(apply(f, x) for x in f.source.elements())


def is_surjective(f: Homomorphism) -> bool:
    return len(image(f)) == f.target.order


def dual_hom(f: Homomorphism) -> Homomorphism:
    """The dual map from characters of the target to characters of the source.

    Coordinate i of the pulled-back character is g_i * sum_j xi_j * M[j][i] / h_j,
    an integer by well-definedness of f.
    """
    g, h = f.source.orders, f.target.orders
    D = tuple(
        tuple(g[i] * f.matrix[j][i] // h[j] for j in range(len(h))) for i in range(len(g))
    )
    return Homomorphism(f.target, f.source, D)


# parsing ---------------------------------------------------------------------

_GROUP_RE = re.compile(r"^Z(\d+)$")
_TUPLE_RE = re.compile(r"\(([^()]*)\)")


def parse_group(text: str, cap: int = DEFAULT_CAP) -> FiniteAbelianGroup:
    """Parse `Z4xZ9` style group strings."""
    parts = text.strip().split("x")
    orders = []
    for part in parts:
        m = _GROUP_RE.match(part.strip())
        if not m:
            raise ValueError("bad group factor %r in %r" % (part, text))
        orders.append(int(m.group(1)))
    return FiniteAbelianGroup(tuple(orders), cap=cap)


def parse_tuples(text: str, convert=int) -> list:
    """Parse "(1,0),(2,1)" into a list of tuples. An empty string is the empty set."""
    text = text.strip()
    if not text:
        return []
    found = _TUPLE_RE.findall(text)
    leftover = _TUPLE_RE.sub("", text).replace(",", "").strip()
    if leftover:
        raise ValueError("unparseable set literal %r" % text)
    out = []
    for body in found:
        body = body.strip()
        out.append(tuple(convert(t.strip()) for t in body.split(",")) if body else ())
    return out


def parse_element_set(G: FiniteAbelianGroup, text: str) -> frozenset:
    out = set()
    for t in parse_tuples(text):
        if len(t) != G.rank:
            raise ShapeMismatch("tuple %r does not match group %s" % (t, G))
        out.add(G.element(t))
    return frozenset(out)


def format_tuple(t) -> str:
    return "(" + ",".join(str(c) for c in t) + ")"


def format_element_set(S: Iterable) -> str:
    return ",".join(format_tuple(t) for t in sorted(S))


def parse_homomorphism(text: str) -> Homomorphism:
    data = json.loads(text)
    return Homomorphism(
        parse_group(data["source"]), parse_group(data["target"]), tuple(map(tuple, data["matrix"]))
    )


def as_group(G) -> FiniteAbelianGroup:
    if isinstance(G, FiniteAbelianGroup):
        return G
    if isinstance(G, str):
        return parse_group(G)
    return FiniteAbelianGroup(tuple(G))
