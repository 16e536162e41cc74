"""
Truncated models of the compact groups T, Z_p and their finite products.

Points
    Torus   -> TorusValue
    PAdic   -> int (a p-adic integer with a finite expansion)
    Product -> tuple of factor points
Characters
    Torus   -> int m, x -> m*x
    PAdic   -> (m, n) meaning x -> m*x/p^n, normalised so that 0 < m < p^n and
               p does not divide m, or (0, 0) for the trivial character
    Product -> tuple of factor characters; the support is the set of indices
               carrying a nonzero factor character

Only finitely many characters of an infinite model can ever be checked, so
every verification here is labelled with the bound it was run at.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .finite import FiniteAbelianGroup
from .torus import (
    ZERO,
    OpenArc,
    TorusValue,
    canonicalize,
    in_arc,
    in_t_plus,
    parse_rational,
    scale,
)


class BoundsInsufficient(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def primes_up_to(n: int) -> list:
    return [p for p in range(2, n + 1) if is_prime(p)]


class Torus:
    is_finite = False
    zero = ZERO
    zero_character = 0

    def __str__(self):
        return "T"

    def __repr__(self):
        return "Torus()"

    def __eq__(self, other):
        return isinstance(other, Torus)

    def __hash__(self):
        return hash("T")

    def pairing(self, m: int, x: TorusValue) -> TorusValue:
        return scale(m, x)

    def characters(self, bound: int):
        return iter(range(-bound, bound + 1))

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def is_zero_character(self, chi) -> bool:
        return chi == 0


@dataclass(frozen=True)
class PAdic:
    p: int
    is_finite = False
    zero = 0
    zero_character = (0, 0)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("%r is not a prime" % (self.p,))

    def __str__(self):
        return "Zp(%d)" % self.p

    def character(self, m: int, n: int) -> tuple:
        """Normal form of x -> m*x/p^n (the relation (m, n) ~ (m*p, n+1) removed)."""
        p = self.p
        if n < 0:
            raise ValueError("n must be >= 0")
        m %= p**n
        while n > 0 and m % p == 0:
            m //= p
            n -= 1
        if m == 0 or n == 0:
            return (0, 0)
        return (m, n)

    def pairing(self, chi, x: int) -> TorusValue:
        m, n = chi
        return canonicalize(Fraction(m * x, self.p**n))

    def characters(self, bound: int):
        """(0,0) then, for n = 1..bound, every unit residue m mod p^n."""
        p = self.p
        yield (0, 0)
        for n in range(1, bound + 1):
            for m in range(1, p**n):
                if m % p:
                    yield (m, n)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def is_zero_character(self, chi) -> bool:
        return chi == (0, 0)


@dataclass(frozen=True)
class ProductBound:
    """Character bound on a product: per-factor bound, max support size, index window."""

    levels: tuple
    support: int | None = None
    window: tuple | None = None

    def __str__(self):
        s = "levels=%s" % (list(self.levels),)
        if self.support is not None:
            s += " support<=%d" % self.support
        if self.window is not None:
            s += " window=%s" % (list(self.window),)
        return s


@dataclass(frozen=True)
class Product:
    factors: tuple
    is_finite = False

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    def __str__(self):
        return "prod(%s)" % ",".join(str(f) for f in self.factors)

    @property
    def zero(self):
        return tuple(f.zero for f in self.factors)

    @property
    def zero_character(self):
        return tuple(f.zero_character for f in self.factors)

    def support(self, chi) -> list:
        return [i for i, (f, c) in enumerate(zip(self.factors, chi)) if c != f.zero_character]

    def pairing(self, chi, x) -> TorusValue:
        if len(chi) != len(self.factors) or len(x) != len(self.factors):
            raise ValueError("shape mismatch for %s" % self)
        total = ZERO
        for i in self.support(chi):
            total = total + self.factors[i].pairing(chi[i], x[i])
        return total

    def bound(self, level, support=None, window=None) -> ProductBound:
        if not isinstance(level, (tuple, list)):
            level = (level,) * len(self.factors)
        return ProductBound(tuple(level), support, None if window is None else tuple(window))

    def characters(self, bound):
        if not isinstance(bound, ProductBound):
            bound = self.bound(bound)
        window = set(range(len(self.factors))) if bound.window is None else set(bound.window)
        lists = []
        for i, (f, lev) in enumerate(zip(self.factors, bound.levels)):
            if i in window:
                lists.append(list(f.characters(lev)))
            else:
                lists.append([f.zero_character])
        for chi in itertools.product(*lists):
            if bound.support is None or len(self.support(chi)) <= bound.support:
                yield chi

    def add(self, x, y):
        return tuple(f.add(a, b) for f, a, b in zip(self.factors, x, y))

    def neg(self, x):
        return tuple(f.neg(a) for f, a in zip(self.factors, x))

    def is_zero_character(self, chi) -> bool:
        return chi == self.zero_character


def model_pairing(M, chi, x) -> TorusValue:
    return M.pairing(chi, x)


def enumerate_characters_bounded(M, B):
    return M.characters(B)


# sequences ---------------------------------------------------------------------


@dataclass(frozen=True)
class SuperSequence:
    """Finitely many terms of a super-sequence together with its limit."""

    terms: tuple
    limit: object

    def __post_init__(self):
        terms = tuple(self.terms)
        if len(set(terms)) != len(terms):
            raise ValueError("super-sequence terms must be distinct")
        object.__setattr__(self, "terms", terms)

    def points(self) -> list:
        """Terms in order, then the limit (listed once)."""
        return [t for t in self.terms if t != self.limit] + [self.limit]

    def as_set(self) -> frozenset:
        return frozenset(self.points())

    def __len__(self):
        return len(self.points())


def torus_qc_sequence(N: int) -> SuperSequence:
    """The points 1/(2n), n = 1..N, converging to 0 in T."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return SuperSequence(tuple(canonicalize(Fraction(1, 2 * n)) for n in range(1, N + 1)), ZERO)


def zp_qc_sequence(p: int, L: int) -> SuperSequence:
    """The points k*p^j (0 <= j < L, 1 <= k <= p-1) converging to 0 in Z_p."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if not is_prime(p):
        raise ValueError("%r is not a prime" % (p,))
    return SuperSequence(tuple(k * p**j for j in range(L) for k in range(1, p)), 0)


def fan(models: Sequence, subsets: Sequence[Iterable]) -> frozenset:
    """Union of the factor-embedded subsets, plus the zero of the product."""
    if len(models) != len(subsets):
        raise ValueError("need one subset per factor")
    zero = [m.zero for m in models]
    out = {tuple(zero)}
    for i, S in enumerate(subsets):
        for x in S:
            pt = list(zero)
            pt[i] = x
            out.add(tuple(pt))
    return frozenset(out)


def fan_sequence(P: Product, seqs: Sequence[SuperSequence]) -> SuperSequence:
    """The fan of factor super-sequences, as a super-sequence of the product."""
    if len(P.factors) != len(seqs):
        raise ValueError("need one sequence per factor")
    zero = P.zero
    terms = []
    for i, S in enumerate(seqs):
        for t in S.terms:
            if t == S.limit:
                continue
            pt = list(zero)
            pt[i] = t
            terms.append(tuple(pt))
    return SuperSequence(tuple(terms), zero)


def fan_finite(groups: Sequence[FiniteAbelianGroup], subsets: Sequence[Iterable]):
    """Fan in a product of finite groups; returns (product group, fan set)."""
    if len(groups) != len(subsets):
        raise ValueError("need one subset per factor")
    G = FiniteAbelianGroup(tuple(n for g in groups for n in g.orders))
    offsets = list(itertools.accumulate([0] + [g.rank for g in groups]))
    out = {G.zero}
    for i, S in enumerate(subsets):
        for x in S:
            pt = list(G.zero)
            pt[offsets[i] : offsets[i + 1]] = groups[i].element(x)
            out.add(tuple(pt))
    return G, frozenset(out)


def factor_sequence(P: Product, S: SuperSequence, j: int) -> SuperSequence:
    """The terms of S living on factor j alone, projected to that factor."""
    zero = P.zero
    terms = []
    for t in S.terms:
        if t[j] != zero[j] and all(t[i] == zero[i] for i in range(len(zero)) if i != j):
            terms.append(t[j])
    return SuperSequence(tuple(terms), zero[j])


def constructive_witness(M, chi, S: SuperSequence):
    """Closed-form point x of S with chi(x) outside T_+, for nonzero chi.

    Torus: x = 1/(2|m|), value +-1/2.
    PAdic: x = k*p^(n-1) with k*m = (p-1)/2 (mod p), value (p-1)/(2p); k = 1 when p = 2.
    Product: the smallest index of the support, where the other factors vanish.
    """
    if M.is_zero_character(chi):
        raise ValueError("the trivial character has no witness")
    if isinstance(M, Torus):
        x = canonicalize(Fraction(1, 2 * abs(chi)))
    elif isinstance(M, PAdic):
        p = M.p
        m, n = chi
        k = 1 if p == 2 else (p - 1) // 2 * pow(m, -1, p) % p
        x = k * p ** (n - 1)
    elif isinstance(M, Product):
        j0 = M.support(chi)[0]
        xj, _ = constructive_witness(M.factors[j0], chi[j0], factor_sequence(M, S, j0))
        pt = list(M.zero)
        pt[j0] = xj
        x = tuple(pt)
    else:
        raise TypeError("unsupported model %r" % (M,))
    if x not in S.as_set():
        raise BoundsInsufficient("sequence does not reach the witness %r for %r" % (x, chi))
    return x, M.pairing(chi, x)


# verification ------------------------------------------------------------------


def describe_bound(B) -> str:
    return str(B)


@dataclass
class WitnessReport:
    """Per-character certificates of qc-density, valid up to ``bound``."""

    context: str
    bound: object
    certificates: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    exact: bool = False
    cross_checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def label(self) -> str:
        if self.exact:
            return "qc-dense (exact)" if self.ok else "not qc-dense"
        verdict = "qc-dense" if self.ok else "not qc-dense"
        return "%s up to character bound %s" % (verdict, describe_bound(self.bound))


def _first_witness(M, chi, pts):
    for x in pts:
        v = M.pairing(chi, x)
        if not in_t_plus(v):
            return x, v
    return None


def verify_qc_dense_up_to(M, X: Iterable, B, threads: int = 1) -> WitnessReport:
    """Search X exhaustively for a witness against every nonzero character within B.

    Independent of the closed-form witnesses; the report keeps characters in
    enumeration order.
    """
    pts = X.points() if isinstance(X, SuperSequence) else list(X)
    chars = [chi for chi in M.characters(B) if chi != M.zero_character]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            found = list(ex.map(lambda c: _first_witness(M, c, pts), chars, chunksize=64))
    else:
        found = [_first_witness(M, c, pts) for c in chars]
    report = WitnessReport(str(M), B, exact=getattr(M, "is_finite", False))
    for chi, w in zip(chars, found):
        if w is None:
            report.failures.append(chi)
        else:
            report.certificates.append((chi, w[0], w[1]))
    return report


@dataclass
class ConvergenceReport:
    converges: bool
    exceptions: frozenset
    stable: bool | None = None


def _inside(M, x, constraints: dict) -> bool:
    for idx, c in constraints.items():
        factor, coord = M, x
        if isinstance(M, Product):
            factor, coord = M.factors[idx], x[idx]
        elif isinstance(M, FiniteAbelianGroup):
            if coord[idx] % c:
                return False
            continue
        elif idx != 0:
            raise ValueError("model %s has a single coordinate" % M)
        if isinstance(factor, Torus):
            if not in_arc(coord, c if isinstance(c, OpenArc) else OpenArc(c)):
                return False
        elif isinstance(factor, PAdic):
            if coord % factor.p**c:
                return False
        else:
            raise TypeError("cannot constrain factor %r" % (factor,))
    return True


def check_supersequence_convergence(M, S: SuperSequence, nbhd: dict, extended: SuperSequence | None = None):
    """Which terms of S fall outside a basic neighbourhood of the limit.

    ``nbhd`` maps a coordinate index to a constraint: an OpenArc (or radius) for a
    torus coordinate, a level l (meaning p^l divides the point) for a p-adic
    coordinate, a modulus d for a coordinate of a finite group. Passing a longer
    truncation ``extended`` of the same sequence additionally checks that no new
    exception appears further out.
    """
    if not _inside(M, S.limit, nbhd):
        return ConvergenceReport(False, frozenset([S.limit]))
    exc = frozenset(t for t in S.terms if not _inside(M, t, nbhd))
    stable = None
    if extended is not None:
        stable = frozenset(t for t in extended.terms if not _inside(M, t, nbhd)) == exc
    return ConvergenceReport(stable is not False, exc, stable)


# parsing ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(prod|Zp|T|\(|\)|,|[-+]?\d+(?:/\d+)?)")


def _tokens(text: str) -> list:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError("cannot parse %r at %d" % (text, pos))
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_model(text: str):
    """`T`, `Zp(3)`, `prod(T,Zp(3),T)` (products may nest)."""
    toks = _tokens(text)
    model, rest = _parse_model(toks)
    if rest:
        raise ValueError("trailing input in model %r" % text)
    return model


def _parse_model(toks):
    if not toks:
        raise ValueError("empty model")
    head = toks[0]
    if head == "T":
        return Torus(), toks[1:]
    if head == "Zp":
        if len(toks) < 4 or toks[1] != "(" or toks[3] != ")":
            raise ValueError("expected Zp(<prime>)")
        return PAdic(int(toks[2])), toks[4:]
    if head == "prod":
        if len(toks) < 2 or toks[1] != "(":
            raise ValueError("expected prod(...)")
        toks = toks[2:]
        factors = []
        while True:
            f, toks = _parse_model(toks)
            factors.append(f)
            if not toks:
                raise ValueError("unterminated prod(")
            if toks[0] == ")":
                return Product(tuple(factors)), toks[1:]
            if toks[0] != ",":
                raise ValueError("expected , or ) in prod")
            toks = toks[1:]
    raise ValueError("unknown model %r" % head)


def parse_point(M, text):
    toks = _tokens(str(text))
    x, rest = _parse_point(M, toks)
    if rest:
        raise ValueError("trailing input in point %r" % text)
    return x


def _parse_point(M, toks):
    if isinstance(M, Torus):
        return canonicalize(parse_rational(toks[0])), toks[1:]
    if isinstance(M, PAdic):
        v = parse_rational(toks[0])
        if v.denominator != 1:
            raise ValueError("p-adic points must be integers")
        return int(v), toks[1:]
    if toks[0] != "(":
        raise ValueError("expected ( for a product point")
    toks = toks[1:]
    coords = []
    for i, f in enumerate(M.factors):
        c, toks = _parse_point(f, toks)
        coords.append(c)
        want = ")" if i == len(M.factors) - 1 else ","
        if not toks or toks[0] != want:
            raise ValueError("expected %r in product point" % want)
        toks = toks[1:]
    return tuple(coords), toks


def parse_point_set(M, text: str) -> list:
    """Comma-separated points; product points are parenthesised tuples."""
    toks = _tokens(text)
    out = []
    while toks:
        x, toks = _parse_point(M, toks)
        out.append(x)
        if toks:
            if toks[0] != ",":
                raise ValueError("expected , between points")
            toks = toks[1:]
    return out


def format_point(M, x) -> str:
    if isinstance(M, Torus):
        return str(x)
    if isinstance(M, PAdic):
        return str(x)
    if isinstance(M, FiniteAbelianGroup):
        return "(" + ",".join(str(c) for c in x) + ")"
    return "(" + ",".join(format_point(f, c) for f, c in zip(M.factors, x)) + ")"


def character_json(M, chi):
    """JSON-friendly form of a character: int, [m, n], or a list per factor."""
    if isinstance(M, Torus):
        return chi
    if isinstance(M, PAdic):
        return list(chi)
    if isinstance(M, FiniteAbelianGroup):
        return list(chi)
    return [character_json(f, c) for f, c in zip(M.factors, chi)]
