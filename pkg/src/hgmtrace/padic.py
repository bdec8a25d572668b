"""Values of the Morita p-adic Gamma function modulo p.

Only the mod-p table on integer arguments is needed here: the table is
built in O(p) multiplications from the functional equation
Gamma_p(n + 1) = omega(n) * Gamma_p(n), and rational arguments reduce to
table lookups because Gamma_p is 1-Lipschitz for p >= 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import is_prime


def omega(x: int, p: int) -> int:
    """The functional-equation factor: -x mod p for a unit x, else -1 mod p."""
    x %= p
    return p - x if x else p - 1


@dataclass(frozen=True)
class GammaTable:
    """values[n] = Gamma_p(n) mod p for n = 0..p-1; immutable once built."""

    p: int
    values: tuple[int, ...]


def gamma_table(p: int) -> GammaTable:
    """Gamma_p on the integers 0..p-1, reduced mod p.

    Built incrementally from values[0] = 1 via the functional equation, so
    values[n+1] = (-1)^(n+1) * prod of the units among 1..n.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    vals = [0] * p
    vals[0] = 1
    v = 1
    for n in range(p - 1):
        v = v * (p - n if n else p - 1) % p
        vals[n + 1] = v
    return GammaTable(p=p, values=tuple(vals))


def gamma_at_rational(table: GammaTable, x) -> int:
    """Gamma_p(x) mod p for a rational x with denominator prime to p.

    By 1-Lipschitz continuity the value only depends on x mod p, so this is
    the table entry at the integer residue of x.
    """
    x = Fraction(x)
    p = table.p
    if x.denominator % p == 0:
        raise ValueError(f"denominator of {x} is divisible by {p}")
    n = x.numerator * pow(x.denominator, -1, p) % p
    return table.values[n]


def residue_inverses(p: int) -> list[int]:
    """inv[i] with i * inv[i] = 1 mod p for 1 <= i < p (index 0 unused)."""
    inv = [0] * p
    if p > 1:
        inv[1 % p] = 1 % p
    for i in range(2, p):
        inv[i] = (p - p // i) * inv[p % i] % p
    return inv


def gamma_inverse_values(table: GammaTable) -> list[int]:
    """Elementwise inverses of a gamma table, in O(p)."""
    p = table.p
    inv = residue_inverses(p)
    out = [0] * p
    out[0] = 1
    v = 1
    for n in range(p - 1):
        # inverse of omega(n): -1 for n = 0, else -(n^-1)
        v = v * (p - inv[n] if n else p - 1) % p
        out[n + 1] = v
    return out
