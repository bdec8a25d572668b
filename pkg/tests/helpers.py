"""Shared test helpers: reference point counts, random balanced data, and an
independent 2x2 product used to brute-force remainder-tree outputs."""

import random
from fractions import Fraction

from hgmtrace import from_cyclotomic, normalize
from hgmtrace.core import DatumError


def elliptic_ap(z: Fraction, p: int) -> int:
    """p + 1 - #E(F_p) for E: y^2 = -x(x-1)(x-z), counted by enumeration."""
    z = Fraction(z)
    zr = z.numerator * pow(z.denominator, -1, p) % p
    squares = {i * i % p for i in range(p)}
    count = 1  # point at infinity
    for x in range(p):
        v = -x * (x - 1) * (x - zr) % p
        count += 1 if v == 0 else (2 if v in squares else 0)
    return p + 1 - count


def random_balanced_datum(rng: random.Random, max_degree: int = 6, max_den: int = 8):
    """A random normalized balanced datum built from cyclotomic indices."""
    pool = list(range(1, max_den + 1))
    while True:
        A = rng.choices(pool, k=rng.randint(1, 3))
        B = rng.choices(pool, k=rng.randint(1, 3))
        try:
            alpha, beta = from_cyclotomic(A, B)
        except DatumError:
            continue
        if len(alpha) > max_degree:
            continue
        z = Fraction(rng.choice([2, 3, 5, 7, -2, 9, 11]), rng.choice([1, 1, 1, 4, 5, 7]))
        if z in (0, 1):
            continue
        try:
            return normalize(alpha, beta, z)
        except DatumError:
            continue


def mul2(x, y):
    return (
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    )


def mod2(x, m):
    return tuple(e % m for e in x)


def prefix_product_mod(mats, cut, modulus):
    """A_0 ... A_{cut-1} mod modulus, by direct multiplication."""
    acc = (1, 0, 0, 1)
    for k in range(cut):
        acc = mod2(mul2(acc, mats[k]), modulus)
    return acc
