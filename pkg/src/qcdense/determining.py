"""
Restriction maps, determining subgroups, the super-sequence pipeline and the
box-counting experiment for W(X, U).
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Sequence

from .finite import FiniteAbelianGroup, generated_subgroup, is_subgroup
from .models import (
    BoundsInsufficient,
    PAdic,
    Product,
    SuperSequence,
    Torus,
    WitnessReport,
    fan_finite,
    fan_sequence,
    torus_qc_sequence,
    verify_qc_dense_up_to,
    zp_qc_sequence,
)
from .qc import coordinatize, polar_table, sumset_k_n, w_set
from .search import search_min_dense
from .torus import HALF, OpenArc, canonicalize, in_arc, min_n_with_v_n_inside


class NotInSubgroup(ValueError):
    pass


def restriction_kernel(G: FiniteAbelianGroup, X: Iterable) -> frozenset:
    X = list(X)
    return frozenset(chi for chi in G.characters() if all(G.pairing_numerator(chi, x) == 0 for x in X))


def restriction_table(G: FiniteAbelianGroup, X: Iterable) -> dict:
    """chi -> tuple of values chi(x), x running over X in sorted order."""
    pts = sorted(X)
    return {chi: tuple(G.pairing(chi, x) for x in pts) for chi in G.characters()}


@dataclass
class NearCharVerdict:
    arc_exists: bool
    injective: bool
    radius: Fraction

    @property
    def holds(self) -> bool:
        return self.arc_exists == self.injective


def check_near_characterization(G: FiniteAbelianGroup, X: Iterable) -> NearCharVerdict:
    """Compare "W(X,U) = {0} for some arc U" with injectivity of the restriction map.

    The arc is taken with radius equal to the least nonzero |chi(x)| attained
    (1/2 when nothing nonzero is attained); every smaller arc gives the same W.
    """
    X = list(X)
    table = restriction_table(G, X)
    attained = [abs(v) for vals in table.values() for v in vals if v]
    radius = min(attained) if attained else HALF
    W = w_set(G, X, OpenArc(radius))
    arc_exists = W == {G.zero_character}
    injective = len(set(table.values())) == len(table)
    return NearCharVerdict(arc_exists, injective, radius)


@dataclass
class ExhaustiveNearChar:
    group: str
    subsets: int
    agree: int
    counterexample: frozenset | None = None


def near_characterization_exhaustive(G: FiniteAbelianGroup) -> ExhaustiveNearChar:
    """Run the near-characterization comparison over every subset of G.

    Bitmask version of check_near_characterization: restriction codes are
    built incrementally per subset, W is read off precomputed arc masks.
    """
    tab = polar_table(G)
    n = len(tab.elements)
    nchars = len(tab.characters)
    L = tab.exponent
    # nonzero |value| per element, minimum over characters
    min_abs = []
    for x in range(n):
        vals = [tab.absnum[c][x] for c in range(nchars) if tab.absnum[c][x]]
        min_abs.append(min(vals) if vals else None)
    # signed numerators in [0, L) for injectivity codes
    num = [[G.pairing_numerator(chi, x) for x in tab.elements] for chi in tab.characters]
    codes = [None] * (1 << n)
    codes[0] = (0,) * nchars
    agree = 0
    counter = None
    for m in range(1 << n):
        if m:
            low = (m & -m).bit_length() - 1
            prev = codes[m & (m - 1)]
            codes[m] = tuple(prev[c] * L + num[c][low] for c in range(nchars))
        injective = len(set(codes[m])) == nchars
        attained = [min_abs[i] for i in _bits(m) if min_abs[i] is not None]
        if attained:
            rows = tab.arc_rows(Fraction(min(attained), L))
            W = [c for c in range(nchars) if m & ~rows[c] == 0]
        else:
            W = list(range(nchars))
        arc_exists = W == [0]
        if arc_exists == injective:
            agree += 1
        elif counter is None:
            counter = tab.from_mask(m)
    return ExhaustiveNearChar(str(G), 1 << n, agree, counter)


def _bits(m):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def determines_finite(G: FiniteAbelianGroup, D: Iterable) -> bool:
    """Does the restriction of characters to the subgroup D give a bijection onto D^?"""
    D = frozenset(D)
    if not is_subgroup(G, D):
        raise ValueError("D is not a subgroup of %s" % G)
    restrictions = set(restriction_table(G, D).values())
    injective = len(restrictions) == G.order
    C, _ = coordinatize(G, D)
    dual_order = prod(C.orders)  # |D^| = |D| read off the cyclic decomposition
    return injective and len(restrictions) == dual_order


# membership in generated subgroups of models ---------------------------------------


def _flatten(M, x) -> list:
    """Point of a model as a list of (kind, value) coordinates."""
    if isinstance(M, Torus):
        return [("T", x.value)]
    if isinstance(M, PAdic):
        return [("Z", Fraction(x))]
    if isinstance(M, FiniteAbelianGroup):
        return [("T", Fraction(c, n)) for c, n in zip(x, M.orders)]
    return [c for f, xi in zip(M.factors, x) for c in _flatten(f, xi)]


def _in_lattice(gens: list, target: list) -> bool:
    """Integer-span membership by echelon reduction over Z."""
    rows = [list(g) for g in gens if any(g)]
    target = list(target)
    width = len(target)
    echelon = []
    col = 0
    while rows and col < width:
        rows = [r for r in rows if any(r)]
        piv = [r for r in rows if r[col]]
        if not piv:
            col += 1
            continue
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            for r in piv[1:]:
                q = r[col] // p[col]
                for k in range(width):
                    r[k] -= q * p[k]
            piv = [r for r in piv if r[col]]
        p = piv[0]
        echelon.append((col, p))
        rows = [r for r in rows if r is not p and any(r)]
        col += 1
    for c, p in echelon:
        if target[c] % p[c]:
            return False
        q = target[c] // p[c]
        for k in range(width):
            target[k] -= q * p[k]
    return not any(target)


def in_generated_subgroup(M, generators: Iterable, x) -> bool:
    """Is x in the abstract subgroup generated by ``generators``?"""
    gens = list(generators)
    if x in gens or x == M.zero:
        return True
    if isinstance(M, FiniteAbelianGroup):
        return x in generated_subgroup(M, gens)
    vecs = [_flatten(M, g) for g in gens]
    tvec = _flatten(M, x)
    kinds = [k for k, _ in tvec]
    den = lcm(1, *(v.denominator for vec in vecs + [tvec] for _, v in vec))
    lattice = [[int(v * den) for _, v in vec] for vec in vecs]
    # torus coordinates live mod 1
    for i, k in enumerate(kinds):
        if k == "T":
            e = [0] * len(kinds)
            e[i] = den
            lattice.append(e)
    return _in_lattice(lattice, [int(v * den) for _, v in tvec])


@dataclass
class DeterminationVerdict:
    verdict: bool
    label: str
    witness: list
    report: WitnessReport
    kn_exponent: int | None = None
    counterexample: object = None


def determine_by_witness(M, D_generators: Iterable, X: Iterable, B, arc: OpenArc | None = None) -> DeterminationVerdict:
    """Certify that the subgroup generated by D_generators determines M, up to B.

    X must lie in that subgroup and is checked for qc-density up to B. If it
    fails but W(X, arc) is trivial within B, the sumsets K_n of X are tried up to
    the V_n bound of the arc and the first qc-dense one is returned.
    """
    gens = list(D_generators)
    X = X.points() if isinstance(X, SuperSequence) else list(X)
    for x in X:
        if not in_generated_subgroup(M, gens, x):
            raise NotInSubgroup("%r is not in the subgroup generated by D" % (x,))
    report = verify_qc_dense_up_to(M, X, B)
    if report.ok:
        return DeterminationVerdict(True, report.label, X, report)
    if arc is not None and w_set(M, X, arc, B) == {M.zero_character}:
        for n in range(2, min_n_with_v_n_inside(arc) + 1):
            K = sorted(sumset_k_n(M, X, n), key=repr)
            rep = verify_qc_dense_up_to(M, K, B)
            if rep.ok:
                return DeterminationVerdict(True, rep.label, K, rep, kn_exponent=n)
    return DeterminationVerdict(False, report.label, X, report, counterexample=report.failures[0])


# super-sequence pipeline ----------------------------------------------------------


@dataclass
class SequenceBounds:
    seq_len: int = 50
    levels: int = 4
    char_bound: int = 50
    support: int | None = 2


def build_sequence(M, bounds: SequenceBounds):
    """(super-sequence, character bound) for a model, without verification."""
    if isinstance(M, Torus):
        if bounds.char_bound > bounds.seq_len:
            raise BoundsInsufficient("char bound %d exceeds sequence length %d" % (bounds.char_bound, bounds.seq_len))
        return torus_qc_sequence(bounds.seq_len), bounds.char_bound
    if isinstance(M, PAdic):
        return zp_qc_sequence(M.p, bounds.levels), bounds.levels
    if isinstance(M, Product):
        parts = [build_sequence(f, bounds) for f in M.factors]
        seq = fan_sequence(M, [s for s, _ in parts])
        return seq, M.bound(tuple(b for _, b in parts), bounds.support)
    raise TypeError("unsupported model %r" % (M,))


def build_determining_supersequence(M, bounds: SequenceBounds | None = None):
    """Build a qc-dense super-sequence converging to 0 and verify it.

    Finite groups get the fan of a minimal qc-dense subset of each cyclic factor
    (verified exactly); models get the circle / p-adic sequences and their fans
    (verified up to the character bound).
    """
    bounds = bounds or SequenceBounds()
    if isinstance(M, FiniteAbelianGroup):
        factors = [FiniteAbelianGroup((n,)) for n in M.orders]
        subsets = [search_min_dense(g).subsets[0] for g in factors]
        G, X = fan_finite(factors, subsets)
        terms = tuple(sorted(X - {G.zero}))
        seq = SuperSequence(terms, G.zero)
        return seq, verify_qc_dense_up_to(G, seq, None)
    seq, B = build_sequence(M, bounds)
    return seq, verify_qc_dense_up_to(M, seq, B)


# box counting -----------------------------------------------------------------------


@dataclass
class Theorem1Row:
    M: int
    count: int
    fraction: Fraction


@dataclass
class Theorem1Report:
    dim: int
    arc: OpenArc
    rows: list = field(default_factory=list)
    density: Fraction | None = None
    stable: bool = False
    increasing: bool = False


def _count_congruent(r: int, L: int, M: int) -> int:
    """#{k in [-M, M] : k = r (mod L)}."""
    return (M - r) // L - (-M - 1 - r) // L


def count_w_in_box(X: Sequence, U: OpenArc, M: int, d: int) -> int:
    """Exact |{chi in Z^d : |chi|_inf <= M, chi(X) in U}|, by residue classes.

    chi(x) depends on chi_i only modulo the common denominator of the i-th
    coordinates of X, so the box count is a weighted sum over residues.
    """
    X = [tuple(Fraction(c) for c in x) for x in X]
    mods = [lcm(1, *(x[i].denominator for x in X)) for i in range(d)]
    per_axis = [[_count_congruent(r, L, M) for r in range(L)] for L in mods]
    total = 0
    for res in itertools.product(*(range(L) for L in mods)):
        if all(in_arc(canonicalize(sum(r * c for r, c in zip(res, x))), U) for x in X):
            total += prod(per_axis[i][r] for i, r in enumerate(res))
    return total


def theorem1_experiment(d: int, X: Sequence, U: OpenArc, schedule: Sequence[int]) -> Theorem1Report:
    """Count W(X, U) in growing boxes and test that the density never halves."""
    if d < 1:
        raise ValueError("d must be >= 1")
    for x in X:
        if len(x) != d:
            raise ValueError("point %r is not in T^%d" % (x, d))
    rep = Theorem1Report(d, U)
    for M in sorted(schedule):
        c = count_w_in_box(X, U, M, d)
        rep.rows.append(Theorem1Row(M, c, Fraction(c, (2 * M + 1) ** d)))
    if rep.rows:
        rep.density = rep.rows[0].fraction
        rep.stable = all(r.count >= rep.density / 2 * (2 * r.M + 1) ** d for r in rep.rows[1:])
        rep.increasing = all(a.count < b.count for a, b in zip(rep.rows, rep.rows[1:]))
    return rep


def write_theorem1_csv(rep: Theorem1Report, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "count", "fraction"])
        for r in rep.rows:
            w.writerow([r.M, r.count, "%d/%d" % (r.fraction.numerator, r.fraction.denominator)])
