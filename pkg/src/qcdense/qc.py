"""
Polars, quasi-convex hulls and qc-density.

A context is anything exposing ``characters(bound)``, ``pairing(chi, x)``,
``zero`` / ``zero_character`` and an ``is_finite`` flag. Finite abelian groups
are handled exactly; compact models only up to a character bound, and every
result obtained that way is valid "up to the bound" and nothing more.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .finite import (
    EnumerationCapExceeded,
    FiniteAbelianGroup,
    Homomorphism,
    apply,
    generated_subgroup,
    is_surjective,
    kernel,
)
from .torus import OpenArc, in_arc, in_t_plus, min_n_with_v_n_inside


class MissingBound(ValueError):
    pass


class PreconditionError(ValueError):
    pass


# value tests on finite groups use integer numerators over the exponent L:
# v/L lies in T_+ iff 4 * min(v, L - v) <= L


def _finite_in_t_plus(G: FiniteAbelianGroup, chi, x) -> bool:
    L = G.exponent
    v = G.pairing_numerator(chi, x)
    return 4 * min(v, L - v) <= L


def _characters(ctx, bound):
    if getattr(ctx, "is_finite", False):
        return ctx.characters()
    if bound is None:
        raise MissingBound("a character bound is required on the non-finite model %s" % ctx)
    return ctx.characters(bound)


def _require_finite(ctx):
    if not getattr(ctx, "is_finite", False):
        raise MissingBound("operation needs a finite group; %s is not finite" % ctx)


def _maps_into_t_plus(ctx, chi, E) -> bool:
    if getattr(ctx, "is_finite", False):
        return all(_finite_in_t_plus(ctx, chi, x) for x in E)
    return all(in_t_plus(ctx.pairing(chi, x)) for x in E)


def polar_right(ctx, E: Iterable, bound=None) -> frozenset:
    """Characters mapping every point of E into T_+."""
    E = list(E)
    return frozenset(chi for chi in _characters(ctx, bound) if _maps_into_t_plus(ctx, chi, E))


def polar_left(ctx, A: Iterable) -> frozenset:
    """Elements sent into T_+ by every character of A."""
    _require_finite(ctx)
    A = list(A)
    return frozenset(
        x for x in ctx.elements() if all(_finite_in_t_plus(ctx, chi, x) for chi in A)
    )


def qc_hull(ctx, E: Iterable) -> frozenset:
    _require_finite(ctx)
    return polar_left(ctx, polar_right(ctx, E))


def is_quasi_convex(ctx, E: Iterable) -> bool:
    E = frozenset(E)
    return qc_hull(ctx, E) == E


def is_qc_dense(ctx, E: Iterable, bound=None) -> bool:
    """E has trivial polar (up to ``bound`` on non-finite models)."""
    E = list(E)
    zero = ctx.zero_character
    for chi in _characters(ctx, bound):
        if chi != zero and _maps_into_t_plus(ctx, chi, E):
            return False
    return True


def polar_counterexample(ctx, E: Iterable, bound=None):
    """First nonzero character of the polar of E, or None when E is qc-dense."""
    E = list(E)
    zero = ctx.zero_character
    for chi in _characters(ctx, bound):
        if chi != zero and _maps_into_t_plus(ctx, chi, E):
            return chi
    return None


def dense_certificates(ctx, E: Iterable, bound=None) -> list:
    """(chi, x, value) with value outside T_+ for every nonzero character.

    Raises PreconditionError naming the character for which no witness exists.
    """
    pts = sorted(E)
    zero = ctx.zero_character
    out = []
    for chi in _characters(ctx, bound):
        if chi == zero:
            continue
        for x in pts:
            v = ctx.pairing(chi, x)
            if not in_t_plus(v):
                out.append((chi, x, v))
                break
        else:
            raise PreconditionError("character %r maps the set into T_+" % (chi,))
    return out


def w_set(ctx, X: Iterable, U: OpenArc, bound=None) -> frozenset:
    """W(X, U): characters mapping all of X into the open arc U."""
    X = list(X)
    return frozenset(
        chi for chi in _characters(ctx, bound) if all(in_arc(ctx.pairing(chi, x), U) for x in X)
    )


def sumset_k_n(ctx, X: Iterable, n: int) -> frozenset:
    """The n-fold sumset of X u {0}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    base = frozenset(X) | {ctx.zero}
    cur = base
    cap = getattr(ctx, "cap", None)
    for _ in range(n - 1):
        nxt = frozenset(ctx.add(a, b) for a in cur for b in base)
        if cap is not None and len(nxt) > cap:
            raise EnumerationCapExceeded("sumset exceeds enumeration cap")
        if nxt == cur:
            break
        cur = nxt
    return cur


@dataclass
class SumsetCertificate:
    n: int
    bound: int
    sumset: frozenset
    certificates: list = field(default_factory=list)


def min_sumset_qc_dense(ctx, X: Iterable, U: OpenArc) -> SumsetCertificate:
    """Least n with K_n qc-dense, given W(X, U) = {0}.

    The search never goes past the a-priori bound min_n_with_v_n_inside(U);
    running out there would contradict the K_n argument and is raised.
    """
    _require_finite(ctx)
    X = frozenset(X)
    W = w_set(ctx, X, U)
    if W != {ctx.zero_character}:
        raise PreconditionError("W(X,U) is not trivial: %d characters" % len(W))
    bound = min_n_with_v_n_inside(U)
    for n in range(1, bound + 1):
        K = sumset_k_n(ctx, X, n)
        if is_qc_dense(ctx, K):
            return SumsetCertificate(n, bound, K, dense_certificates(ctx, K))
    raise AssertionError("no qc-dense K_n with n <= %d although W(X,U) = {0}" % bound)


def check_generates(ctx, X: Iterable) -> bool:
    _require_finite(ctx)
    return len(generated_subgroup(ctx, X)) == ctx.order


# homomorphisms ---------------------------------------------------------------


def check_hull_pushforward(f: Homomorphism, X: Iterable) -> bool:
    """f(Q_G(X)) is contained in Q_H(f(X))."""
    X = list(X)
    pushed = frozenset(apply(f, x) for x in qc_hull(f.source, X))
    return pushed <= qc_hull(f.target, [apply(f, x) for x in X])


def coordinatize(G: FiniteAbelianGroup, K: Iterable):
    """Present a subgroup K of G as a standalone product of cyclic groups.

    Returns (C, phi) where C is a FiniteAbelianGroup and phi a dict sending each
    element of C to the corresponding element of K. The basis is found by
    depth-first search over elements of decreasing order.
    """
    K = frozenset(K)
    target = len(K)
    cands = sorted(K - {G.zero}, key=lambda x: (-G.element_order(x), x))

    def span(basis):
        return generated_subgroup(G, basis)

    def dfs(basis, orders, size):
        if size == target:
            return basis, orders
        for g in cands:
            o = G.element_order(g)
            if size * o > target or target % (size * o):
                continue
            if len(span(basis + [g])) != size * o:
                continue  # <g> meets the current span
            if orders and o > orders[-1]:
                continue
            found = dfs(basis + [g], orders + [o], size * o)
            if found:
                return found
        return None

    if target == 1:
        C = FiniteAbelianGroup((1,))
        return C, {(0,): G.zero}
    basis, orders = dfs([], [], 1)
    C = FiniteAbelianGroup(tuple(orders))
    phi = {}
    for coords in C.elements():
        y = G.zero
        for c, g in zip(coords, basis):
            y = G.add(y, G.mul(c, g))
        phi[coords] = y
    return C, phi


def is_qc_dense_in_subgroup(G: FiniteAbelianGroup, K: Iterable, Y: Iterable) -> bool:
    """Is Y (a subset of the subgroup K) qc-dense in K as a group in its own right?"""
    C, phi = coordinatize(G, K)
    back = {v: k for k, v in phi.items()}
    return is_qc_dense(C, [back[y] for y in Y])


@dataclass
class ThreeSpaceVerdict:
    x_dense: bool
    image_dense: bool
    counterexample: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.x_dense == self.image_dense


def check_three_space(f: Homomorphism, X: Iterable) -> ThreeSpaceVerdict:
    """Check "X qc-dense in G iff f(X) qc-dense in H" under the kernel precondition."""
    X = frozenset(X)
    G, H = f.source, f.target
    if not is_surjective(f):
        raise PreconditionError("homomorphism is not surjective")
    K = kernel(f)
    if not is_qc_dense_in_subgroup(G, K, X & K):
        raise PreconditionError("X meet ker f is not qc-dense in ker f")
    fX = frozenset(apply(f, x) for x in X)
    chi = polar_counterexample(G, X)
    xi = polar_counterexample(H, fX)
    x_dense, image_dense = chi is None, xi is None
    counter = None
    if x_dense != image_dense:
        counter = chi if chi is not None else xi
    return ThreeSpaceVerdict(x_dense, image_dense, counter)


# bitmask tables for exhaustive work on small groups --------------------------


class PolarTable:
    """T_+ incidence between characters and elements of a small finite group.

    Subsets are bitmasks over ``elements`` (lexicographic order); character sets
    are bitmasks over ``characters`` (same order).
    """

    def __init__(self, G: FiniteAbelianGroup):
        self.G = G
        self.elements = list(G.elements())
        self.characters = self.elements
        self.index = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        self.full = (1 << n) - 1
        L = G.exponent
        self.exponent = L
        # absnum[c][x] = numerator of |chi_c(x)| over L, in [0, L/2]
        self.absnum = []
        for chi in self.characters:
            row = []
            for x in self.elements:
                v = G.pairing_numerator(chi, x)
                row.append(min(v, L - v))
            self.absnum.append(row)
        self.rows = [self._mask(lambda a: 4 * a <= L, c) for c in range(n)]
        self.cols = [
            sum(1 << c for c in range(n) if (self.rows[c] >> x) & 1) for x in range(n)
        ]
        self.zero_rows = [self._mask(lambda a: a == 0, c) for c in range(n)]
        self._arc_rows = {}

    def _mask(self, pred, c):
        return sum(1 << x for x, a in enumerate(self.absnum[c]) if pred(a))

    def to_mask(self, S: Iterable) -> int:
        return sum(1 << self.index[x] for x in set(S))

    def from_mask(self, m: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(m))

    def polar(self, mask: int) -> int:
        out = self.full
        for i in _bits(mask):
            out &= self.cols[i]
        return out

    def left(self, cmask: int) -> int:
        out = self.full
        for c in _bits(cmask):
            out &= self.rows[c]
        return out

    def hull(self, mask: int) -> int:
        return self.left(self.polar(mask))

    def is_dense(self, mask: int) -> bool:
        return self.polar(mask) == 1  # only the zero character (index 0)

    def all_polars(self) -> list:
        """Polar of every subset mask 0 .. 2^n - 1, by dynamic programming."""
        n = len(self.elements)
        out = [0] * (1 << n)
        out[0] = self.full
        for m in range(1, 1 << n):
            low = (m & -m).bit_length() - 1
            out[m] = out[m & (m - 1)] & self.cols[low]
        return out

    def arc_rows(self, radius) -> list:
        """Per character, the mask of elements whose value lies in the open arc."""
        key = radius
        if key not in self._arc_rows:
            # |v|/L < a/b  <=>  |v| * b < a * L
            a, b = radius.numerator, radius.denominator
            L = self.exponent
            self._arc_rows[key] = [
                self._mask(lambda v: v * b < a * L, c) for c in range(len(self.characters))
            ]
        return self._arc_rows[key]


@lru_cache(maxsize=64)
def polar_table(G: FiniteAbelianGroup) -> PolarTable:
    return PolarTable(G)


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def iter_subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
