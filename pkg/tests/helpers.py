"""Shared oracles and random instance generators for the test-suite."""

from fractions import Fraction

from qcdense.finite import FiniteAbelianGroup, Homomorphism, IllDefinedHomomorphism, is_surjective, kernel
from qcdense.torus import in_t_plus


def divisor_chains(n, lo=2):
    """Invariant-factor lists d1 | d2 | ... with product n, d1 >= lo."""
    if n == 1:
        yield []
        return
    for d in range(lo, n + 1):
        if n % d == 0:
            for rest in divisor_chains(n // d, d):
                if all(r % d == 0 for r in rest):
                    yield [d] + rest


def abelian_groups_up_to(N):
    out = []
    for n in range(2, N + 1):
        for chain in divisor_chains(n):
            out.append(FiniteAbelianGroup(tuple(chain)))
    return out


def brute_polar(G, E):
    """Polar through exact Fraction pairings, independent of the integer fast path."""
    E = list(E)
    return frozenset(chi for chi in G.characters() if all(in_t_plus(G.pairing(chi, x)) for x in E))


def brute_dense_in_subgroup(G, K, Y):
    """Y qc-dense in the subgroup K: every character of G with chi(Y) in T_+ vanishes on K.

    Characters of K are exactly the restrictions of characters of G.
    """
    for chi in G.characters():
        if all(in_t_plus(G.pairing(chi, y)) for y in Y) and any(G.pairing(chi, k) for k in K):
            return False
    return True


def random_group(rng, max_factors=2, max_order=12):
    k = rng.randint(1, max_factors)
    return FiniteAbelianGroup(tuple(rng.randint(2, max_order) for _ in range(k)))


def random_surjection(rng, max_order=12):
    while True:
        G = random_group(rng, 2, max_order)
        H = random_group(rng, 2, 8)
        M = [[rng.randrange(0, h) for _ in G.orders] for h in H.orders]
        try:
            f = Homomorphism(G, H, M)
        except IllDefinedHomomorphism:
            continue
        if is_surjective(f) and H.order > 1:
            return f


def random_subset(rng, items, k_max):
    items = list(items)
    k = rng.randint(0, min(k_max, len(items)))
    return set(rng.sample(items, k))


def random_three_space_instance(rng):
    """(f, X) with X meet ker f qc-dense in ker f, checked with the restriction oracle."""
    f = random_surjection(rng)
    G = f.source
    K = sorted(kernel(f))
    while True:
        Y = random_subset(rng, K, len(K))
        if brute_dense_in_subgroup(G, K, Y):
            break
    R = random_subset(rng, G.elements(), 4)
    return f, frozenset(Y | R)


def grid(den_max):
    """All reduced rationals in (-1/2, 1/2] with denominator <= den_max."""
    out = set()
    for b in range(1, den_max + 1):
        for a in range(-b // 2, b // 2 + 1):
            q = Fraction(a, b)
            if -Fraction(1, 2) < q <= Fraction(1, 2):
                out.add(q)
    return sorted(out)
