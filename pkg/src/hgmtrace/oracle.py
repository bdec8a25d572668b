"""Direct per-prime evaluation of the mod-p Frobenius trace sum.

This is the quadratic-time baseline: for each good odd prime it sums the
p - 1 terms of the trace formula, evaluating every Pochhammer-style ratio
termwise from the Gamma_p table.  It deliberately shares no code with the
interval/matrix pipeline so the two can check each other.
"""

from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import is_prime

from .core import HypergeometricDatum, InvariantViolation, motive_spec
from .padic import gamma_at_rational, gamma_inverse_values, gamma_table


def require_good(datum: HypergeometricDatum, p: int) -> None:
    """Raise ValueError unless p is an odd prime that is good for the datum."""
    if p == 2:
        raise ValueError("p = 2 is excluded")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    b = math.lcm(*[e.denominator for e in datum.entries])
    if b % p == 0:
        raise ValueError(f"{p} is wild for this datum")
    zn, zd = datum.z.numerator, datum.z.denominator
    if zn % p == 0 or zd % p == 0 or (zn - zd) % p == 0:
        raise ValueError(f"{p} is tame for this datum")


def eta_diff(datum: HypergeometricDatum, m: int, p: int) -> int:
    """The integer sum of fractional-part differences at index m.

    Computed exactly in rationals:
    sum_j ({alpha_j - m/(p-1)} - alpha_j) - sum_j ({beta_j - m/(p-1)} - beta_j).
    """
    step = Fraction(m, p - 1)
    total = Fraction(0)
    for a in datum.alpha:
        d = a - step
        total += d - math.floor(d) - a
    for b in datum.beta:
        d = b - step
        total -= d - math.floor(d) - b
    if total.denominator != 1:
        raise InvariantViolation(f"eta difference {total} is not an integer")
    return int(total)


def xi_m(beta, m: int, p: int) -> int:
    """#{j : beta_j = 0} - #{j : beta_j = m/(p-1)} (exact rational equality)."""
    target = Fraction(m, p - 1)
    beta = [Fraction(b) for b in beta]
    return sum(1 for b in beta if b == 0) - sum(1 for b in beta if b == target)


def pochhammer_term(datum: HypergeometricDatum, p: int, m: int, table=None) -> int:
    """z^m times the product of the Pochhammer-style ratios, mod p.

    This is the unit part of the m-th summand; it carries no power of p.
    """
    if table is None:
        table = gamma_table(p)
    step = Fraction(m, p - 1)
    num = den = 1
    for a in datum.alpha:
        d = a - step
        num = num * gamma_at_rational(table, d - math.floor(d)) % p
        den = den * gamma_at_rational(table, a) % p
    for b in datum.beta:
        d = b - step
        den = den * gamma_at_rational(table, d - math.floor(d)) % p
        num = num * gamma_at_rational(table, b) % p
    z = datum.z
    zpow = pow(z.numerator * pow(z.denominator, -1, p) % p, m, p)
    return zpow * num * pow(den, -1, p) % p


def trace_mod_p_oracle(datum: HypergeometricDatum, p: int) -> int:
    """The trace sum mod p, by direct summation over m = 0..p-2.

    Terms whose total p-power exponent is positive vanish mod p and are
    skipped; exponent-zero terms contribute their sign times the unit part.
    Costs O(r*p) after the O(p) gamma table.
    """
    require_good(datum, p)
    spec = motive_spec(datum)
    gtab = gamma_table(p)
    table = gtab.values
    ginv = gamma_inverse_values(gtab)

    def prep(entries):
        out = []
        for e in entries:
            n = e.numerator * pow(e.denominator, -1, p) % p
            brk = e.numerator * (p - 1) // e.denominator  # floor(e*(p-1)), exact
            out.append((n, brk))
        return out

    A = prep(datum.alpha)
    B = prep(datum.beta)
    const = 1
    for n, _ in A:
        const = const * ginv[n] % p
    for n, _ in B:
        const = const * table[n] % p

    # eta_m(alpha) - eta_m(beta) steps by +-1 exactly when m passes a floor break
    eta_step = [0] * p
    for _, brk in A:
        eta_step[brk + 1] += 1
    for _, brk in B:
        eta_step[brk + 1] -= 1
    # positions where some beta_j equals m/(p-1) exactly
    xi_drop = [0] * p
    for e in datum.beta:
        if e.numerator * (p - 1) % e.denominator == 0:
            xi_drop[e.numerator * (p - 1) // e.denominator] += 1

    xi0 = spec.xi_beta
    D = spec.D
    z = datum.z
    z_res = z.numerator * pow(z.denominator, -1, p) % p

    total = 0
    eta = 0
    zpow = 1
    for m in range(p - 1):
        if m:
            eta += eta_step[m]
            zpow = zpow * z_res % p
        exponent = eta + D + xi0 - xi_drop[m]
        if exponent:
            if exponent < 0:
                raise InvariantViolation(f"negative p-power exponent at p={p}, m={m}")
            continue
        t = zpow * const % p
        for n, brk in A:
            arg = n + m + (1 if m > brk else 0)
            if arg >= p:
                arg -= p
            t = t * table[arg] % p
        for n, brk in B:
            arg = n + m + (1 if m > brk else 0)
            if arg >= p:
                arg -= p
            t = t * ginv[arg] % p
        total = (total + (p - t if eta & 1 else t)) % p
    return total
