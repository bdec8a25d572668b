"""Amortized computation of the trace sum for all good primes at once.

The summation range [0, p-2] is split at the breaks m_i = floor(g_i(p-1)),
g_i running over the datum entries.  Inside each interval the ratio of
consecutive unit terms is a fixed rational function f(k)/g(k) whose
coefficients depend only on the residue of p modulo the break denominator,
so one accumulating remainder tree per (interval, residue class) yields
the interval subproducts for every prime simultaneously.  Per-prime break
matrices then glue the subproducts, and the trace falls out of a single
division in the assembled 2x2 matrix.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    HypergeometricDatum,
    InvariantViolation,
    MotiveSpec,
    good_primes,
    motive_spec,
    zigzag,
)
from .oracle import trace_mod_p_oracle
from .remtree import IDENTITY, TriMat, mat_mod, mat_mul, rem_forest

DEFAULT_FOREST_BITS = 1 << 26


@dataclass(frozen=True)
class Shift:
    """delta in [0, 1] with denominator dividing the break's, epsilon in {1, 2},
    satisfying floor(gamma*(p-1)) + epsilon = delta mod p for p in the class."""

    delta: Fraction
    epsilon: int


@dataclass(frozen=True)
class IntervalPlan:
    """Transition data for one interval and one residue class.

    f and g are the integer numerator/denominator polynomials of the
    term-to-term ratio (coefficients low to high), d the common scalar that
    cleared their denominators, sigma in {-1, 0, 1} the sign with which the
    interval's terms enter the running sum.
    """

    i: int
    c: int
    shift: Shift
    f: tuple[int, ...]
    g: tuple[int, ...]
    d: int
    sigma: int


@dataclass(frozen=True)
class BreakMatrix:
    """The glue matrix at break i for a single prime: rows (1, 0), (tau, unit)."""

    i: int
    p: int
    matrix: TriMat


@dataclass(frozen=True)
class AssembledTrace:
    p: int
    S: TriMat
    h: int


@dataclass
class TraceRecord:
    p: int
    h: int
    a: int | None = None
    source: str = "amortized"


def _floor_mul(x: Fraction, n: int) -> int:
    return x.numerator * n // x.denominator


def rational_shift(gamma, c: int) -> Shift:
    """The start-point shift for a break gamma = a/b and a residue class c mod b.

    With r = a(c-1) mod b: (delta, epsilon) = ((b-a-r)/b, 1) if a + r < b,
    else ((2b-a-r)/b, 2).  Then floor(gamma*(p-1)) + epsilon = delta mod p
    for every prime p = c mod b not dividing b.
    """
    gamma = Fraction(gamma)
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    a, b = gamma.numerator, gamma.denominator
    if math.gcd(c, b) != 1:
        raise ValueError(f"residue class {c} is not invertible mod {b}")
    r = a * (c - 1) % b
    if a + r < b:
        return Shift(delta=Fraction(b - a - r, b), epsilon=1)
    return Shift(delta=Fraction(2 * b - a - r, b), epsilon=2)


def sigma_value(spec: MotiveSpec, datum: HypergeometricDatum, i: int) -> int:
    """Sign of the interval starting at break i: nonzero only when the
    p-power exponent Z(g_i) + xi(beta) + D vanishes, with the parity of Z."""
    zg = zigzag(datum, spec.breaks[i])
    if zg + spec.xi_beta + spec.D != 0:
        return 0
    return 1 if zg % 2 == 0 else -1


def _iota(x, y) -> int:
    return 1 if x <= y else 0


def _poly_mul(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        for j, gj in enumerate(g):
            out[i + j] += fi * gj
    return out


def _monic_linear_product(constants) -> list[Fraction]:
    out = [Fraction(1)]
    for c in constants:
        out = _poly_mul(out, [Fraction(c), Fraction(1)])
    return out


def interval_polynomials(
    datum: HypergeometricDatum, i: int, c: int, spec: MotiveSpec | None = None
) -> IntervalPlan:
    """The transition polynomials for interval i and residue class c.

    F(k) = z * prod_j (alpha_j + delta + [alpha_j <= g_i] + k - epsilon) and
    G(k) the same product over beta without the z factor; d clears all
    denominators, f = d*F and g = d*G.
    """
    if spec is None:
        spec = motive_spec(datum)
    start = spec.breaks[i]
    shift = rational_shift(start, c)
    off = shift.delta - shift.epsilon
    F = _monic_linear_product(a + off + _iota(a, start) for a in datum.alpha)
    F = [datum.z * coef for coef in F]
    G = _monic_linear_product(b + off + _iota(b, start) for b in datum.beta)
    d = math.lcm(*[coef.denominator for coef in F + G])
    return IntervalPlan(
        i=i,
        c=c,
        shift=shift,
        f=tuple(int(coef * d) for coef in F),
        g=tuple(int(coef * d) for coef in G),
        d=d,
        sigma=sigma_value(spec, datum, i),
    )


def _horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for coef in reversed(coeffs):
        acc = acc * x + coef
    return acc


def _eval_range(coeffs: Sequence[int], count: int, start: int = 1) -> list[int]:
    """coeffs evaluated at start, start+1, ..., start+count-1 by forward differences."""
    n = len(coeffs) - 1
    if count <= 0:
        return []
    out = [_horner(coeffs, start + t) for t in range(min(count, n + 1))]
    if count <= n + 1:
        return out
    diffs = out[:]
    for level in range(1, n + 1):
        for idx in range(n, level - 1, -1):
            diffs[idx] -= diffs[idx - 1]
    for _ in range(n):  # advance the ladder to the last emitted point
        for j in range(n):
            diffs[j] += diffs[j + 1]
    for _ in range(count - n - 1):
        for j in range(n):
            diffs[j] += diffs[j + 1]
        out.append(diffs[0])
    return out


def a_matrix(plan: IntervalPlan, k: int) -> TriMat:
    """The k-th transition matrix [[g(k), 0], [sigma*g(k), f(k)]] over the integers."""
    fk = _horner(plan.f, k)
    gk = _horner(plan.g, k)
    return TriMat(gk, 0, plan.sigma * gk, fk)


def interval_products(
    datum: HypergeometricDatum,
    i: int,
    c: int,
    primes: Sequence[int],
    *,
    forest_bits: int = DEFAULT_FOREST_BITS,
    spec: MotiveSpec | None = None,
) -> dict[int, TriMat]:
    """S_i(p) = A(1) A(2) ... A(m_{i+1} - m_i - 1) mod p for each given prime.

    All primes must lie in class c modulo the denominator of break i; a cut
    of zero or less yields the identity.  One remainder forest covers the
    whole class.
    """
    if spec is None:
        spec = motive_spec(datum)
    if not primes:
        return {}
    start, end = spec.breaks[i], spec.breaks[i + 1]
    d = start.denominator
    for p in primes:
        if p % d != c % d:
            raise ValueError(f"prime {p} is not congruent to {c} mod {d}")
    plan = interval_polynomials(datum, i, c, spec=spec)
    cuts = [
        max(_floor_mul(end, p - 1) - _floor_mul(start, p - 1) - 1, 0) for p in primes
    ]
    kmax = max(cuts)
    if kmax == 0:
        return {p: IDENTITY for p in primes}
    fv = _eval_range(plan.f, kmax)
    gv = _eval_range(plan.g, kmax)
    sig = plan.sigma
    if sig == 0:
        mats = [TriMat(gk, 0, 0, fk) for fk, gk in zip(fv, gv)]
    else:
        mats = [TriMat(gk, 0, sig * gk, fk) for fk, gk in zip(fv, gv)]
    total_bits = sum(p.bit_length() for p in primes)
    width = max(1, -(-total_bits // forest_bits))
    outs = rem_forest(mats, primes, cuts, width)
    return dict(zip(primes, outs))


def tau_value(spec: MotiveSpec, datum: HypergeometricDatum, i: int, p: int) -> int:
    """Sign with which the break term at m_i enters the running sum.

    Case analysis on Z(g_{i-1}) + xi_{m_i}(beta) + D = 0 with the parity of
    Z(g_{i-1}); at i = 0 the break term is the m = 0 summand, which survives
    mod p exactly when D = 0.
    """
    if i == 0:
        return 1 if spec.D == 0 else 0
    zg = zigzag(datum, spec.breaks[i - 1])
    mi = _floor_mul(spec.breaks[i], p - 1)
    hits = sum(1 for b in datum.beta if b.numerator * (p - 1) == b.denominator * mi)
    if zg + spec.xi_beta - hits + spec.D != 0:
        return 0
    return 1 if zg % 2 == 0 else -1


def _omega_res(x: int, p: int) -> int:
    return p - x if x else p - 1


def _h_entry(num: int, den: int, inv_den: int, mi: int, p: int) -> int:
    """Functional-equation multiplier carrying one datum entry past break m_i."""
    scaled = num * (p - 1)
    x0 = (num * inv_den + mi) % p
    x1 = x0 + 1 if x0 + 1 < p else 0
    if scaled < den * mi:
        return _omega_res(x1, p)
    if scaled >= den * (mi + 1):
        return _omega_res(x0, p)
    return _omega_res(x1, p) * _omega_res(x0, p) % p


def _break_matrix(
    datum: HypergeometricDatum,
    spec: MotiveSpec,
    p: int,
    mi: int,
    i: int,
    inv_cache: dict[int, int],
) -> TriMat:
    tau = tau_value(spec, datum, i, p)
    num = 1
    for a in datum.alpha:
        num = num * _h_entry(a.numerator, a.denominator, inv_cache[a.denominator], mi, p) % p
    den = 1
    for b in datum.beta:
        den = den * _h_entry(b.numerator, b.denominator, inv_cache[b.denominator], mi, p) % p
    z = datum.z
    z_res = z.numerator * inv_cache[z.denominator] % p
    val = z_res * num * pow(den, -1, p) % p
    if val == 0:
        raise InvariantViolation(f"vanishing break multiplier at p={p}, i={i}")
    return TriMat(1, 0, tau, val)


def _inverse_cache(datum: HypergeometricDatum, p: int) -> dict[int, int]:
    cache = {}
    for e in datum.entries + (datum.z,):
        d = e.denominator
        if d not in cache:
            cache[d] = pow(d, -1, p)
    return cache


def fix_break(
    datum: HypergeometricDatum, i: int, p: int, spec: MotiveSpec | None = None
) -> BreakMatrix:
    """The glue matrix T_i(p): rows (1, 0) and (tau_i, z * prod of multipliers).

    The lower-right entry advances the tracked unit term past the break;
    the lower-left entry adds the break term itself to the running sum.
    """
    if spec is None:
        spec = motive_spec(datum)
    mi = _floor_mul(spec.breaks[i], p - 1)
    mat = _break_matrix(datum, spec, p, mi, i, _inverse_cache(datum, p))
    return BreakMatrix(i=i, p=p, matrix=mat)


def assemble(
    datum: HypergeometricDatum,
    p: int,
    s_maps: Sequence[Mapping[int, TriMat]],
    break_mats: Sequence[BreakMatrix],
    spec: MotiveSpec | None = None,
) -> AssembledTrace:
    """S(p) = T_0 S_0 T_1 S_1 ... T_{s-1} S_{s-1} mod p and h = S_21 / S_11.

    ``s_maps[i]`` maps primes to the interval product S_i(p); missing
    primes mean an empty interval (identity).  ``break_mats`` must be in
    ascending break order.
    """
    acc = IDENTITY
    for bm in break_mats:
        acc = mat_mod(mat_mul(acc, bm.matrix), p)
        s_i = s_maps[bm.i].get(p, IDENTITY)
        acc = mat_mod(mat_mul(acc, s_i), p)
    if acc.m11 % p == 0:
        raise InvariantViolation(f"assembled matrix has non-unit denominator at p={p}")
    h = acc.m21 * pow(acc.m11, -1, p) % p
    return AssembledTrace(p=p, S=acc, h=h)


def _eligible_split(
    datum: HypergeometricDatum, spec: MotiveSpec, X: int
) -> tuple[list[int], dict[int, list[int]], list[int]]:
    """Partition the good primes into amortized-eligible and oracle-fallback.

    Eligible primes have strictly increasing break positions m_0 < ... < m_s
    and are not below max(denominators) + 2; tiny or colliding primes go to
    the oracle, which has no such blind spots.
    """
    maxden = max(e.denominator for e in datum.entries)
    s = len(spec.breaks) - 1
    eligible: list[int] = []
    fallback: list[int] = []
    mtab: dict[int, list[int]] = {}
    for p in good_primes(datum, X):
        ms = [_floor_mul(g, p - 1) for g in spec.breaks]
        if p >= maxden + 2 and all(ms[k] < ms[k + 1] for k in range(s)):
            eligible.append(p)
            mtab[p] = ms
        else:
            fallback.append(p)
    return eligible, mtab, fallback


def traces(
    datum: HypergeometricDatum,
    X: int,
    *,
    forest_bits: int = DEFAULT_FOREST_BITS,
    threads: int = 1,
) -> list[TraceRecord]:
    """One record per good odd prime p <= X with the trace mod p.

    Runs one remainder forest per (interval, residue class) pair, then a
    per-prime fold of break and interval matrices in break order.  Primes
    too small for the interval decomposition are evaluated by the direct
    oracle and flagged with source "oracle-fallback".
    """
    if X < 3:
        raise ValueError("X must be at least 3")
    spec = motive_spec(datum)
    breaks = spec.breaks
    s = len(breaks) - 1
    eligible, mtab, fallback = _eligible_split(datum, spec, X)

    jobs = []
    for i in range(s):
        d = breaks[i].denominator
        by_class: dict[int, list[int]] = {}
        for p in eligible:
            by_class.setdefault(p % d, []).append(p)
        for c, ps in sorted(by_class.items()):
            jobs.append((i, c, ps))

    def run(job):
        i, c, ps = job
        return i, interval_products(datum, i, c, ps, forest_bits=forest_bits, spec=spec)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(run, jobs))
    else:
        outs = [run(job) for job in jobs]

    s_maps: list[dict[int, TriMat]] = [{} for _ in range(s)]
    for i, products in outs:
        s_maps[i].update(products)

    records = []
    for p in eligible:
        inv_cache = _inverse_cache(datum, p)
        ms = mtab[p]
        break_mats = [
            BreakMatrix(i, p, _break_matrix(datum, spec, p, ms[i], i, inv_cache))
            for i in range(s)
        ]
        result = assemble(datum, p, s_maps, break_mats, spec=spec)
        records.append(TraceRecord(p=p, h=result.h))
    for p in fallback:
        records.append(TraceRecord(p=p, h=trace_mod_p_oracle(datum, p), source="oracle-fallback"))
    records.sort(key=lambda rec: rec.p)
    return records
