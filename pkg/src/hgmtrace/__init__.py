"""Mod-p Frobenius traces of a fixed hypergeometric motive for all good
primes up to a bound, in amortized quasilinear time, with a direct
per-prime oracle for verification and a weight-1 integer-trace lifter."""

from .amortized import (
    AssembledTrace,
    BreakMatrix,
    IntervalPlan,
    Shift,
    TraceRecord,
    a_matrix,
    assemble,
    fix_break,
    interval_polynomials,
    interval_products,
    rational_shift,
    sigma_value,
    tau_value,
    traces,
)
from .cli import Ambiguous, RunConfig, lift_weight_one
from .core import (
    DatumError,
    HypergeometricDatum,
    InvariantViolation,
    MotiveSpec,
    PrimeClass,
    classify_primes,
    from_cyclotomic,
    good_primes,
    is_balanced,
    motive_spec,
    normalize,
    primes_up_to,
    zigzag,
)
from .oracle import eta_diff, pochhammer_term, trace_mod_p_oracle, xi_m
from .padic import GammaTable, gamma_at_rational, gamma_table, omega
from .remtree import IDENTITY, TriMat, rem_forest, rem_tree, rem_tree_with_spacing

__all__ = [
    "Ambiguous",
    "AssembledTrace",
    "BreakMatrix",
    "DatumError",
    "GammaTable",
    "HypergeometricDatum",
    "IDENTITY",
    "IntervalPlan",
    "InvariantViolation",
    "MotiveSpec",
    "PrimeClass",
    "RunConfig",
    "Shift",
    "TraceRecord",
    "TriMat",
    "a_matrix",
    "assemble",
    "classify_primes",
    "eta_diff",
    "fix_break",
    "from_cyclotomic",
    "gamma_at_rational",
    "gamma_table",
    "good_primes",
    "interval_polynomials",
    "interval_products",
    "is_balanced",
    "lift_weight_one",
    "motive_spec",
    "normalize",
    "omega",
    "pochhammer_term",
    "primes_up_to",
    "rational_shift",
    "rem_forest",
    "rem_tree",
    "rem_tree_with_spacing",
    "sigma_value",
    "tau_value",
    "trace_mod_p_oracle",
    "traces",
    "xi_m",
    "zigzag",
]
