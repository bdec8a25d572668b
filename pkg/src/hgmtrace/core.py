"""Exact-rational domain model for balanced hypergeometric data.

Validation and normalization of a datum (two disjoint balanced tuples of
rationals in [0, 1) plus a parameter z), the zigzag step function with the
weight and twist combinatorics derived from it, break points, and the
classification of primes relative to a fixed datum.

All arithmetic here is exact (``fractions.Fraction``); nothing in this
module depends on a prime bound.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

GOOD = "good"
WILD = "wild"
TAME = "tame"
EXCLUDED_SMALL = "excluded-small"


class DatumError(ValueError):
    """The given data do not describe a valid balanced datum."""


class InvariantViolation(RuntimeError):
    """An arithmetic invariant that should hold unconditionally failed."""


def _sorted_fractions(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(sorted(Fraction(v) for v in values))


def _is_balanced_tuple(entries: Sequence) -> bool:
    counts: dict[int, dict[int, int]] = {}
    for e in entries:
        e = Fraction(e)
        if not 0 <= e < 1:
            return False
        per_den = counts.setdefault(e.denominator, {})
        per_den[e.numerator] = per_den.get(e.numerator, 0) + 1
    for den, per_num in counts.items():
        residues = [0] if den == 1 else [a for a in range(1, den) if math.gcd(a, den) == 1]
        if len({per_num.get(a, 0) for a in residues}) != 1:
            return False
    return True


def is_balanced(alpha: Sequence, beta: Sequence) -> bool:
    """True iff both tuples are Galois-stable.

    A tuple is Galois-stable (balanced) when, for every denominator d, all
    reduced fractions a/d with gcd(a, d) = 1 occur in it with the same
    multiplicity.
    """
    return _is_balanced_tuple(alpha) and _is_balanced_tuple(beta)


@dataclass(frozen=True)
class HypergeometricDatum:
    """Two disjoint balanced tuples in [0, 1), stored sorted, plus the parameter z.

    Instances are normalized: 0 never occurs in ``alpha``.  Use
    :func:`normalize` to build a datum from raw tuples that may need the
    swap to the reciprocal parameter.
    """

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    z: Fraction

    def __post_init__(self):
        alpha = _sorted_fractions(self.alpha)
        beta = _sorted_fractions(self.beta)
        z = Fraction(self.z)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "z", z)
        if not alpha or len(alpha) != len(beta):
            raise DatumError("alpha and beta must be nonempty tuples of equal length")
        for e in alpha + beta:
            if not 0 <= e < 1:
                raise DatumError(f"datum entry {e} lies outside [0, 1)")
        if set(alpha) & set(beta):
            raise DatumError("alpha and beta must be disjoint as multisets")
        if not is_balanced(alpha, beta):
            raise DatumError("alpha and beta must each be balanced (Galois-stable)")
        if z in (0, 1):
            raise DatumError("parameter z must avoid 0 and 1")
        if alpha[0] == 0:
            raise DatumError("0 in alpha; use normalize() to swap to the reciprocal parameter")

    @property
    def degree(self) -> int:
        return len(self.alpha)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return self.alpha + self.beta


def normalize(alpha: Sequence, beta: Sequence, z) -> HypergeometricDatum:
    """Build a datum, swapping to (beta, alpha, 1/z) when 0 occurs in alpha.

    The swap is harmless because the two parameter choices describe
    isomorphic motives; it guarantees 0 is absent from alpha.
    """
    a = _sorted_fractions(alpha)
    b = _sorted_fractions(beta)
    z = Fraction(z)
    if z in (0, 1):
        raise DatumError("parameter z must avoid 0 and 1")
    if 0 in a:
        if 0 in b:
            raise DatumError("0 occurs in both alpha and beta")
        a, b, z = b, a, 1 / z
    return HypergeometricDatum(a, b, z)


def from_cyclotomic(A: Sequence[int], B: Sequence[int]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Expand cyclotomic indices into balanced tuples.

    Each index n contributes the reduced fractions {k/n : 0 <= k < n,
    gcd(k, n) = 1}; the output tuples are sorted.  Raises
    :class:`DatumError` on a degree mismatch or overlapping output.
    """
    if not A or not B:
        raise DatumError("cyclotomic index lists must be nonempty")

    def expand(indices):
        out = []
        for n in indices:
            n = int(n)
            if n < 1:
                raise DatumError(f"cyclotomic index {n} must be positive")
            out.extend(Fraction(k, n) for k in range(n) if math.gcd(k, n) == 1)
        return tuple(sorted(out))

    alpha = expand(A)
    beta = expand(B)
    if len(alpha) != len(beta):
        raise DatumError(f"degree mismatch: {len(alpha)} != {len(beta)}")
    if set(alpha) & set(beta):
        raise DatumError("cyclotomic indices produce overlapping tuples")
    return alpha, beta


def zigzag(datum: HypergeometricDatum, x) -> int:
    """#{j : alpha_j <= x} - #{j : beta_j <= x} for x in [0, 1]."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("zigzag argument must lie in [0, 1]")
    return sum(1 for a in datum.alpha if a <= x) - sum(1 for b in datum.beta if b <= x)


@dataclass(frozen=True)
class MotiveSpec:
    """Combinatorics derived from a datum: degree r, weight w, twist exponent D,
    count of zeros in beta, sorted break list 0 = g_0 < ... < g_s = 1, and the
    least common denominator b of all entries."""

    r: int
    w: int
    D: int
    xi_beta: int
    breaks: tuple[Fraction, ...]
    b: int


@functools.lru_cache(maxsize=64)
def motive_spec(datum: HypergeometricDatum) -> MotiveSpec:
    """Weight, twist exponent and break data of a normalized datum.

    The weight is the difference between the zigzag maximum over alpha and
    its minimum over beta, minus one.  Raises :class:`InvariantViolation`
    if the twist exponent (w + 1 - #{beta_j = 0})/2 fails to be an integer
    or if r*w is odd.
    """
    w = max(zigzag(datum, a) for a in datum.alpha) - min(zigzag(datum, b) for b in datum.beta) - 1
    r = datum.degree
    if w < 0 or (r * w) % 2:
        raise InvariantViolation(f"impossible weight {w} for degree {r}")
    xi = sum(1 for b in datum.beta if b == 0)
    if (w + 1 - xi) % 2:
        raise InvariantViolation("twist exponent (w + 1 - #zeros)/2 is not an integer")
    breaks = tuple(sorted(set(datum.alpha) | set(datum.beta) | {Fraction(0), Fraction(1)}))
    b = math.lcm(*[e.denominator for e in datum.entries])
    return MotiveSpec(r=r, w=w, D=(w + 1 - xi) // 2, xi_beta=xi, breaks=breaks, b=b)


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by a byte sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray((1,)) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(2, limit + 1) if sieve[i]]


@dataclass(frozen=True)
class PrimeClass:
    p: int
    kind: str  # one of GOOD, WILD, TAME, EXCLUDED_SMALL


def classify_primes(datum: HypergeometricDatum, X: int) -> list[PrimeClass]:
    """Classify every prime p <= X relative to the datum, in increasing order.

    wild: p divides the common denominator of the datum entries;
    tame: z or z - 1 fails to be a p-adic unit (p divides the numerator or
    denominator of z, or the numerator of z - 1); excluded-small: p = 2.
    A prime matching several criteria gets the first label in the order
    wild, tame, excluded-small.  (p = 2 can never be good: z and z - 1
    cannot both be odd, so 2 is always wild or tame already.)
    """
    if X < 2:
        raise ValueError("X must be at least 2")
    b = math.lcm(*[e.denominator for e in datum.entries])
    zn, zd = datum.z.numerator, datum.z.denominator
    z1n = zn - zd  # numerator of z - 1
    out = []
    for p in primes_up_to(X):
        if b % p == 0:
            kind = WILD
        elif zn % p == 0 or zd % p == 0 or z1n % p == 0:
            kind = TAME
        elif p == 2:
            kind = EXCLUDED_SMALL
        else:
            kind = GOOD
        out.append(PrimeClass(p, kind))
    return out


def good_primes(datum: HypergeometricDatum, X: int) -> list[int]:
    """The good (hence odd) primes p <= X, increasing."""
    return [pc.p for pc in classify_primes(datum, X) if pc.kind == GOOD]
