import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from qcdense.solenoid import (
    SOLENOID_ZERO,
    InsufficientParameters,
    SolenoidElement,
    constructive_qhat_witness,
    factorize,
    fracpart,
    pairing_raw,
    qhat_qc_sequence,
    rational_characters,
    required_parameters,
    solenoid_add,
    solenoid_element,
    solenoid_from_json,
    solenoid_neg,
    solenoid_pairing,
    u_representative,
    verify_qhat_qc_dense,
)
from qcdense.torus import canonicalize, in_t_plus

PRIMES = [2, 3, 5, 7, 11, 13]


def tv(a, b=1):
    return canonicalize(F(a, b))


def rationals(h):
    return st.builds(F, st.integers(-h, h), st.integers(1, h)).filter(lambda q: q != 0)


elements = st.builds(
    lambda t, c, s: SolenoidElement(t, c, tuple(s.items())),
    st.fractions(min_value=-3, max_value=3, max_denominator=60),
    st.integers(-50, 50),
    st.dictionaries(st.sampled_from(PRIMES), st.integers(-200, 200), max_size=3),
)


def test_fracpart():
    assert fracpart(F(1, 3), 3) == F(1, 3)
    assert fracpart(F(-1, 3), 3) == F(2, 3)
    assert fracpart(F(5, 12), 2) == F(3, 4)  # 5/12 - 3/4 = -1/3, 2-integral
    assert fracpart(F(7, 5), 3) == 0
    # a rational is congruent mod Z to the sum of its fractional parts
    for q in rational_characters(25):
        rest = q - sum(fracpart(q, p) for p in factorize(q.denominator))
        assert rest.denominator == 1


def test_add_examples():
    a = solenoid_element("3/4")
    b = solenoid_element("1/2")
    s = solenoid_add(a, b)
    assert (s.t, s.c, s.s) == (F(1, 4), -1, ())
    x = solenoid_element("1/6", 2, {3: 6})
    assert solenoid_add(x, solenoid_neg(x)) == SOLENOID_ZERO
    assert solenoid_add(SOLENOID_ZERO, u_representative()) == SOLENOID_ZERO


def test_normal_form():
    x = SolenoidElement(F(7, 3), 0, ((5, 0), (3, 2)))
    assert x.t == F(1, 3) and x.c == -2 and x.s == ((3, 2),)
    with pytest.raises(ValueError):
        SolenoidElement(F(0), 0, ((4, 1),))


def test_json_roundtrip():
    x = solenoid_element("1/6", 0, {3: 6})
    assert x.to_json() == {"t": "1/6", "c": 0, "s": {"3": 6}}
    assert solenoid_from_json(x.to_json()) == x


def test_pairing_examples():
    assert solenoid_pairing(F(3), solenoid_element("1/6")) == tv(1, 2)
    assert solenoid_pairing(F(1, 3), solenoid_element(0, 0, {3: 1})) == tv(-1, 3)
    assert solenoid_pairing(F(5, 12), u_representative()) == tv(0)


def test_well_definedness_random():
    # 500 random (q, representative): adding u leaves the value unchanged
    rng = random.Random(0)
    for _ in range(500):
        q = F(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 50))
        t = F(rng.randint(-100, 100), rng.randint(1, 30))
        c = rng.randint(-40, 40)
        s = {p: rng.randint(-100, 100) for p in rng.sample(PRIMES, rng.randint(0, 3))}
        base = pairing_raw(q, t, c, s)
        assert pairing_raw(q, t + 1, c + 1, s) == base
        assert pairing_raw(q, t - 3, c - 3, s) == base
        assert solenoid_pairing(q, SolenoidElement(t, c, tuple(s.items()))) == base


@settings(max_examples=200)
@given(rationals(40), elements, elements)
def test_additivity(q, x, y):
    assert solenoid_pairing(q, x + y) == solenoid_pairing(q, x) + solenoid_pairing(q, y)
    assert solenoid_pairing(q, -x) == -solenoid_pairing(q, x)


@settings(max_examples=200)
@given(st.integers(-40, 40), elements)
def test_integer_characters_see_only_t(m, x):
    assert solenoid_pairing(F(m), x) == canonicalize(m * x.t)


@settings(max_examples=200)
@given(rationals(40), elements, st.sampled_from(PRIMES), st.integers(-100, 100))
def test_independent_of_other_primes(q, x, p, v):
    if q.denominator % p == 0:
        return
    s = x.corrections
    s[p] = s.get(p, 0) + v
    y = SolenoidElement(x.t, x.c, tuple(s.items()))
    assert solenoid_pairing(q, y) == solenoid_pairing(q, x)


def test_sequence_shape():
    X = qhat_qc_sequence(1, 2, 1)
    assert set(X) == {solenoid_element("1/2"), solenoid_element(0, 0, {2: 1}), SOLENOID_ZERO}
    assert solenoid_element("1/4") in qhat_qc_sequence(2, 2, 1)
    X = set(qhat_qc_sequence(1, 3, 2))
    for k in (1, 2, 3, 6):
        assert solenoid_element(0, 0, {3: k}) in X


def test_witness_examples():
    assert constructive_qhat_witness(F(2)) == solenoid_element("1/4")
    assert solenoid_pairing(F(2), solenoid_element("1/4")) == tv(1, 2)
    w = constructive_qhat_witness(F(1, 2))
    assert w == solenoid_element(0, 0, {2: 1})
    assert solenoid_pairing(F(1, 2), w) == tv(1, 2)
    w = constructive_qhat_witness(F(1, 3))
    assert w == solenoid_element(0, 0, {3: 1})
    assert solenoid_pairing(F(1, 3), w) == tv(-1, 3)


def test_constructive_witness_values():
    for q in rational_characters(20):
        v = solenoid_pairing(q, constructive_qhat_witness(q))
        assert not in_t_plus(v)
        if q.denominator == 1:
            assert v == tv(1, 2)
        else:
            p = min(factorize(q.denominator))
            assert abs(v.value) == F(p - 1, 2 * p) or (p == 2 and v == tv(1, 2))


def test_verify_small_height():
    N, P, L = required_parameters(12)
    assert (N, P, L) == (12, 11, 3)
    rep = verify_qhat_qc_dense(qhat_qc_sequence(N, P, L), 12)
    assert rep.ok and len(rep.certificates) == len(rational_characters(12))


def test_insufficient_parameters():
    with pytest.raises(InsufficientParameters):
        verify_qhat_qc_dense(qhat_qc_sequence(5, 11, 3), 12)
    with pytest.raises(InsufficientParameters):
        verify_qhat_qc_dense(qhat_qc_sequence(12, 11, 2), 12)
