"""
The dual of the discrete rationals, realised as N/<u> with N = R x prod_p Z_p
and u = (1, (1, 1, ...)).

A representative stores a real part t, a common integer offset c added to
every p-adic coordinate, and finitely many corrections s[p], so the p-adic
coordinate at p is c + s.get(p, 0). Keeping c separate lets multiples of u,
which have full support, stay finite.

A rational q acts by

    chi_q(t, z) = q*t - sum_p frac_p(q * z_p)   (mod 1)

where frac_p(r) is the p-adic fractional part of r. Only primes dividing the
denominator of q contribute. The formula vanishes on u because a rational is
congruent mod Z to the sum of its p-adic fractional parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable

from .models import WitnessReport, is_prime, primes_up_to
from .torus import TorusValue, canonicalize, format_rational, in_t_plus, parse_rational


class InsufficientParameters(ValueError):
    pass


def factorize(n: int) -> dict:
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("valuation of 0")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def fracpart(r: Fraction, p: int) -> Fraction:
    """The unique a/p^e in [0, 1) with r - a/p^e a p-adic integer."""
    r = Fraction(r)
    e = valuation(r.denominator, p)
    if e == 0:
        return Fraction(0)
    pe = p**e
    rest = r.denominator // pe
    return Fraction(r.numerator * pow(rest, -1, pe) % pe, pe)


@dataclass(frozen=True)
class SolenoidElement:
    t: Fraction = Fraction(0)
    c: int = 0
    s: tuple = ()  # sorted (prime, correction) pairs, corrections nonzero

    def __post_init__(self):
        t = Fraction(self.t)
        items = dict(self.s)
        for p in items:
            if not is_prime(p):
                raise ValueError("%r is not a prime" % (p,))
        # subtract floor(t) * u
        k = floor(t)
        object.__setattr__(self, "t", t - k)
        object.__setattr__(self, "c", int(self.c) - k)
        object.__setattr__(self, "s", tuple(sorted((p, v) for p, v in items.items() if v)))

    @property
    def corrections(self) -> dict:
        return dict(self.s)

    def coordinate(self, p: int) -> int:
        return self.c + self.corrections.get(p, 0)

    def __add__(self, other):
        return solenoid_add(self, other)

    def __neg__(self):
        return solenoid_neg(self)

    def to_json(self) -> dict:
        return {"t": format_rational(self.t), "c": self.c, "s": {str(p): v for p, v in self.s}}

    def __str__(self):
        return "{t:%s, c:%d, s:{%s}}" % (
            format_rational(self.t),
            self.c,
            ", ".join('"%d":%d' % (p, v) for p, v in self.s),
        )


SOLENOID_ZERO = SolenoidElement()


def solenoid_element(t=0, c=0, s=None) -> SolenoidElement:
    return SolenoidElement(parse_rational(t), c, tuple((s or {}).items()))


def solenoid_from_json(data: dict) -> SolenoidElement:
    return solenoid_element(data.get("t", 0), data.get("c", 0), {int(p): v for p, v in data.get("s", {}).items()})


def u_representative() -> SolenoidElement:
    """The generator u = (1, (1)_p) of the subgroup divided out; it normalises to zero."""
    return SolenoidElement(Fraction(1), 1)


def solenoid_add(a: SolenoidElement, b: SolenoidElement) -> SolenoidElement:
    s = a.corrections
    for p, v in b.s:
        s[p] = s.get(p, 0) + v
    return SolenoidElement(a.t + b.t, a.c + b.c, tuple(s.items()))


def solenoid_neg(a: SolenoidElement) -> SolenoidElement:
    return SolenoidElement(-a.t, -a.c, tuple((p, -v) for p, v in a.s))


def solenoid_pairing(q, x: SolenoidElement) -> TorusValue:
    q = parse_rational(q)
    total = q * x.t
    for p in factorize(q.denominator):
        total -= fracpart(q * x.coordinate(p), p)
    return canonicalize(total)


def pairing_raw(q: Fraction, t: Fraction, c: int, s: dict) -> TorusValue:
    """Pairing evaluated on an arbitrary (non-normalised) representative."""
    total = q * t
    for p in factorize(q.denominator):
        total -= fracpart(q * (c + s.get(p, 0)), p)
    return canonicalize(total)


def height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


def rational_characters(H: int) -> list:
    """Nonzero reduced rationals of height <= H, ordered by (height, numerator, denominator)."""
    out = set()
    for b in range(1, H + 1):
        for a in range(-H, H + 1):
            if a:
                out.add(Fraction(a, b))
    return sorted(out, key=lambda q: (height(q), q.numerator, q.denominator))


def qhat_qc_sequence(N: int, P: int, L: int) -> list:
    """Torus part 1/(2n) (n <= N), p-adic parts k*p^j at each prime p <= P, and zero."""
    if min(N, P, L) < 1:
        raise ValueError("parameters must be >= 1")
    pts = [SolenoidElement(Fraction(1, 2 * n)) for n in range(1, N + 1)]
    for p in primes_up_to(P):
        for j in range(L):
            for k in range(1, p):
                pts.append(SolenoidElement(Fraction(0), 0, ((p, k * p**j),)))
    pts.append(SOLENOID_ZERO)
    return pts


def constructive_qhat_witness(q: Fraction) -> SolenoidElement:
    """Closed-form witness for a nonzero rational character q.

    Integer q: the torus point 1/(2|q|). Otherwise the smallest prime p dividing
    the denominator, e = v_p(den), and the point k*p^(e-1) at p, with k solving
    the congruence that places the value at -(p-1)/(2p) (k = 1 for p = 2).
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("trivial character")
    if q.denominator == 1:
        return SolenoidElement(Fraction(1, 2 * abs(q.numerator)))
    p = min(factorize(q.denominator))
    e = valuation(q.denominator, p)
    if p == 2:
        k = 1
    else:
        # value = -frac_p(a*k / (p*b')) = -(a*k*b'^-1 mod p)/p; aim for (p-1)/2
        rest = q.denominator // p**e
        k = (p - 1) // 2 * pow(q.numerator * pow(rest, -1, p), -1, p) % p
    return SolenoidElement(Fraction(0), 0, ((p, k * p ** (e - 1)),))


def verify_qhat_qc_dense(X: Iterable, H: int) -> WitnessReport:
    """Witness every nonzero rational character of height <= H against X.

    The exhaustive search is the arbiter; the closed-form witness must also be
    present in X and land outside T_+, otherwise the parameters are too small
    (raised) or the construction disagrees (reported as a failure).
    """
    pts = list(X)
    members = set(pts)
    report = WitnessReport("Qhat", "height<=%d" % H)
    for q in rational_characters(H):
        cw = constructive_qhat_witness(q)
        if cw not in members:
            raise InsufficientParameters("closed-form witness %s for %s is not in X" % (cw, q))
        cv = solenoid_pairing(q, cw)
        found = None
        for x in pts:
            v = solenoid_pairing(q, x)
            if not in_t_plus(v):
                found = (x, v)
                break
        if found is None or in_t_plus(cv):
            report.failures.append(q)
        else:
            report.certificates.append((q, found[0], found[1]))
            report.cross_checks.append((q, cw, cv))
    return report


def required_parameters(H: int) -> tuple:
    """(N, P, L) sufficient for height bound H."""
    primes = primes_up_to(H)
    L = max([valuation(b, p) for p in primes for b in range(1, H + 1) if b % p == 0] or [1])
    return H, (primes[-1] if primes else 2), max(L, 1)
