import csv
import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest

from qcdense.determining import (
    NotInSubgroup,
    SequenceBounds,
    build_determining_supersequence,
    check_near_characterization,
    count_w_in_box,
    determine_by_witness,
    determines_finite,
    in_generated_subgroup,
    near_characterization_exhaustive,
    restriction_kernel,
    theorem1_experiment,
    write_theorem1_csv,
)
from qcdense.finite import FiniteAbelianGroup, cyclic_subgroups_of_cyclic
from qcdense.models import BoundsInsufficient, PAdic, Product, Torus, torus_qc_sequence, zp_qc_sequence
from qcdense.qc import is_qc_dense
from qcdense.torus import OpenArc, canonicalize

from helpers import abelian_groups_up_to, random_subset

T = Torus()


def Z(n):
    return FiniteAbelianGroup((n,))


def els(*xs):
    return frozenset((x,) for x in xs)


def test_restriction_kernel_examples():
    assert restriction_kernel(Z(4), els(1)) == els(0)
    assert restriction_kernel(Z(4), els(2)) == els(0, 2)
    assert restriction_kernel(Z(4), []) == els(0, 1, 2, 3)


def test_near_char_examples():
    v = check_near_characterization(Z(4), els(1))
    assert v.arc_exists and v.injective and v.radius == F(1, 4)
    v = check_near_characterization(Z(4), els(2))
    assert not v.arc_exists and not v.injective


def test_near_char_exhaustive_cyclic():
    for n in range(1, 11):
        rep = near_characterization_exhaustive(Z(n))
        assert rep.agree == rep.subsets and rep.counterexample is None


def test_exhaustive_matches_direct_check():
    G = FiniteAbelianGroup((2, 4))
    rep = near_characterization_exhaustive(G)
    assert rep.agree == rep.subsets == 256
    count = sum(check_near_characterization(G, X).holds for r in range(9) for X in itertools.combinations(G.elements(), r))
    assert count == 256


def test_near_char_random_larger():
    rng = random.Random(9)
    for _ in range(30):
        G = FiniteAbelianGroup(tuple(rng.randint(2, 40) for _ in range(rng.randint(1, 2))))
        X = random_subset(rng, G.elements(), 3)
        v = check_near_characterization(G, X)
        assert v.holds
        assert v.injective == (restriction_kernel(G, X) == {G.zero})


def test_determines_finite_examples():
    assert determines_finite(Z(12), frozenset(Z(12).elements()))
    assert not determines_finite(Z(12), els(0, 6))
    with pytest.raises(ValueError):
        determines_finite(Z(12), els(0, 5))


def test_determines_finite_cyclic():
    for n in range(1, 31):
        G = Z(n)
        for D in cyclic_subgroups_of_cyclic(n):
            assert determines_finite(G, D) == (len(D) == n)


def test_determines_noncyclic():
    G = FiniteAbelianGroup((2, 4))
    assert determines_finite(G, frozenset(G.elements()))
    assert not determines_finite(G, {(0, 0), (0, 2), (1, 0), (1, 2)})


def test_in_generated_subgroup():
    assert in_generated_subgroup(T, [canonicalize(F(1, 4))], canonicalize(F(1, 2)))
    assert not in_generated_subgroup(T, [canonicalize(F(1, 4))], canonicalize(F(1, 3)))
    assert in_generated_subgroup(T, [canonicalize(F(1, 4)), canonicalize(F(1, 6))], canonicalize(F(1, 12)))
    assert in_generated_subgroup(PAdic(3), [3], 9)
    assert not in_generated_subgroup(PAdic(3), [3], 1)
    P = Product((T, PAdic(2)))
    gens = [(canonicalize(F(1, 2)), 1)]
    assert in_generated_subgroup(P, gens, (canonicalize(0), 2))
    assert not in_generated_subgroup(P, gens, (canonicalize(0), 1))


def test_determine_by_witness_examples():
    S = torus_qc_sequence(100)
    v = determine_by_witness(T, S.points(), S, 100)
    assert v.verdict and "up to character bound 100" in v.label
    S = zp_qc_sequence(3, 5)
    v = determine_by_witness(PAdic(3), S.points(), S, 5)
    assert v.verdict
    v = determine_by_witness(T, [canonicalize(0)], [canonicalize(0)], 3)
    assert not v.verdict and v.counterexample == -3
    with pytest.raises(NotInSubgroup):
        determine_by_witness(T, [canonicalize(F(1, 4))], [canonicalize(F(1, 3))], 3)


def test_determine_by_witness_sumset_route():
    G = Z(8)
    v = determine_by_witness(G, [(1,)], [(1,)], None, arc=OpenArc(F(1, 8)))
    assert v.verdict and v.kn_exponent == 3
    assert is_qc_dense(G, v.witness)


def test_build_finite():
    seq, rep = build_determining_supersequence(FiniteAbelianGroup((4, 3)))
    assert rep.ok and rep.exact
    assert seq.as_set() == {(1, 0), (2, 0), (0, 1), (0, 0)}
    seq, rep = build_determining_supersequence(FiniteAbelianGroup((8, 9)))
    assert rep.ok and is_qc_dense(FiniteAbelianGroup((8, 9)), seq.as_set())


def test_build_models():
    b = SequenceBounds(seq_len=30, levels=3, char_bound=30, support=2)
    for M in [T, PAdic(2), Product((T, PAdic(2)))]:
        seq, rep = build_determining_supersequence(M, b)
        assert rep.ok and not rep.exact
    with pytest.raises(BoundsInsufficient):
        build_determining_supersequence(T, SequenceBounds(seq_len=10, char_bound=20))
    with pytest.raises(TypeError):
        build_determining_supersequence("T")


def _brute_count(X, U, M, d):
    """numpy oracle: evaluate every character in the box."""
    axes = np.arange(-M, M + 1, dtype=np.int64)
    grids = np.meshgrid(*([axes] * d), indexing="ij")
    ok = np.ones(grids[0].shape, dtype=bool)
    r = U.radius
    for x in X:
        den = 1
        for c in x:
            den = den * F(c).denominator // np.gcd(den, F(c).denominator)
        num = sum(g * int(F(c) * den) for g, c in zip(grids, x)) % den
        dist = np.minimum(num, den - num)
        # dist/den < a/b  <=>  dist*b < a*den
        ok &= dist * r.denominator < r.numerator * den
    return int(ok.sum())


def test_count_examples():
    U = OpenArc(F(1, 4))
    assert count_w_in_box([], U, 7, 2) == 15**2
    for M in range(0, 12):
        assert count_w_in_box([(F(1, 2),)], U, M, 1) == 2 * (M // 2) + 1


def test_count_against_numpy_oracle():
    rng = random.Random(2)
    for _ in range(25):
        d = rng.randint(1, 2)
        X = [tuple(F(rng.randint(0, 11), rng.randint(1, 12)) for _ in range(d)) for _ in range(rng.randint(1, 3))]
        U = OpenArc(F(rng.randint(1, 5), 10))
        M = rng.randint(0, 40)
        assert count_w_in_box(X, U, M, d) == _brute_count(X, U, M, d)


def test_theorem1_small(tmp_path):
    X = [(F(1, 6), F(0)), (F(0), F(1, 10))]
    rep = theorem1_experiment(2, X, OpenArc(F(1, 4)), [10, 100])
    assert rep.stable and rep.increasing
    assert rep.rows[0].count == _brute_count(X, OpenArc(F(1, 4)), 10, 2)
    path = tmp_path / "t1.csv"
    write_theorem1_csv(rep, path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["M", "count", "fraction"]
    assert [int(r[0]) for r in rows[1:]] == [10, 100]
    with pytest.raises(ValueError):
        theorem1_experiment(1, X, OpenArc(F(1, 4)), [10])


def test_near_char_on_small_groups():
    for G in abelian_groups_up_to(12):
        rep = near_characterization_exhaustive(G)
        assert rep.agree == rep.subsets
