"""Command-line front end: compute, oracle, verify and bench subcommands.

Records stream out as CSV (fixed header ``p,h`` or ``p,h,a``) or JSONL
(fixed keys ``p``, ``h``, ``a``, ``source``), in increasing prime order.
Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from contextlib import nullcontext
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, TextIO

from .amortized import DEFAULT_FOREST_BITS, TraceRecord, traces
from .core import (
    GOOD,
    DatumError,
    HypergeometricDatum,
    InvariantViolation,
    classify_primes,
    from_cyclotomic,
    good_primes,
    motive_spec,
    normalize,
)
from .oracle import trace_mod_p_oracle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_INTERNAL = 3

DEFAULT_BENCH_LIMITS = tuple(1 << k for k in range(10, 19))


@dataclass
class RunConfig:
    """Parsed invocation: the datum source, the bound, and output options."""

    z: Fraction
    limit: int
    alpha: tuple[Fraction, ...] | None = None
    beta: tuple[Fraction, ...] | None = None
    cyclo_a: tuple[int, ...] | None = None
    cyclo_b: tuple[int, ...] | None = None
    format: str = "csv"
    lift: bool = False
    show_skipped: bool = False
    threads: int = 1
    forest_bits: int = DEFAULT_FOREST_BITS
    output: str | None = None


@dataclass(frozen=True)
class Ambiguous:
    """Lift result when the residue does not pin down a unique integer."""

    candidates: tuple[int, ...]


def lift_weight_one(h: int, p: int, r: int):
    """The integer a = h mod p with |a| <= r*sqrt(p), when unique.

    For p > 4r^2 the window is narrower than p and the lift is unique; for
    smaller p an :class:`Ambiguous` carrying every admissible candidate is
    returned.  Only valid for weight-1 data (the caller checks the weight).
    """
    bound_sq = r * r * p
    hi = math.isqrt(bound_sq)
    c = h % p
    first = c - ((c + hi) // p) * p
    candidates = tuple(x for x in range(first, hi + 1, p) if x * x <= bound_sq)
    if p > 4 * r * r:
        if len(candidates) != 1:
            raise ValueError(f"no admissible lift for h={h} mod {p} with degree {r}")
        return candidates[0]
    return Ambiguous(candidates)


def datum_from_config(config: RunConfig) -> HypergeometricDatum:
    by_fractions = config.alpha is not None or config.beta is not None
    by_cyclotomic = config.cyclo_a is not None or config.cyclo_b is not None
    if by_fractions == by_cyclotomic:
        raise DatumError("supply either --alpha/--beta or --cyclo-a/--cyclo-b")
    if by_fractions:
        if config.alpha is None or config.beta is None:
            raise DatumError("--alpha and --beta must be given together")
        return normalize(config.alpha, config.beta, config.z)
    if config.cyclo_a is None or config.cyclo_b is None:
        raise DatumError("--cyclo-a and --cyclo-b must be given together")
    alpha, beta = from_cyclotomic(config.cyclo_a, config.cyclo_b)
    return normalize(alpha, beta, config.z)


def cmd_compute(config: RunConfig, use_oracle: bool = False) -> Iterator[TraceRecord]:
    """Records for all good odd primes up to the limit, in increasing order."""
    datum = datum_from_config(config)
    spec = motive_spec(datum)
    if config.lift and spec.w != 1:
        raise DatumError(f"--lift requires weight 1, datum has weight {spec.w}")
    if use_oracle:
        records = [
            TraceRecord(p=p, h=trace_mod_p_oracle(datum, p), source="oracle")
            for p in good_primes(datum, config.limit)
        ]
    else:
        records = traces(
            datum, config.limit, forest_bits=config.forest_bits, threads=config.threads
        )
    for rec in records:
        if config.lift:
            lifted = lift_weight_one(rec.h, rec.p, spec.r)
            rec.a = lifted if isinstance(lifted, int) else None
        yield rec


def write_records(
    records, config: RunConfig, stream: TextIO, skipped: Sequence | None = None
) -> None:
    """Serialize records (and optionally skipped primes) in prime order."""
    events = [(rec.p, rec) for rec in records]
    if skipped:
        events.extend((pc.p, pc) for pc in skipped)
    events.sort(key=lambda t: t[0])
    if config.format == "csv":
        stream.write("p,h,a\n" if config.lift else "p,h\n")
        for _, ev in events:
            if isinstance(ev, TraceRecord):
                if config.lift:
                    a = "" if ev.a is None else str(ev.a)
                    stream.write(f"{ev.p},{ev.h},{a}\n")
                else:
                    stream.write(f"{ev.p},{ev.h}\n")
            else:
                stream.write(f"# skipped p={ev.p} class={ev.kind}\n")
    else:
        for _, ev in events:
            if isinstance(ev, TraceRecord):
                stream.write(
                    json.dumps({"p": ev.p, "h": ev.h, "a": ev.a, "source": ev.source})
                    + "\n"
                )
            else:
                stream.write(json.dumps({"p": ev.p, "skipped": ev.kind}) + "\n")


def cmd_verify(config: RunConfig, stream: TextIO) -> int:
    """Exit 0 iff the amortized pipeline matches the direct oracle up to the limit."""
    datum = datum_from_config(config)
    records = traces(
        datum, config.limit, forest_bits=config.forest_bits, threads=config.threads
    )
    for rec in records:
        expected = trace_mod_p_oracle(datum, rec.p)
        if rec.h != expected:
            stream.write(
                f"mismatch at p={rec.p}: amortized={rec.h}, oracle={expected}\n"
            )
            return EXIT_MISMATCH
    stream.write(f"verified {len(records)} primes up to {config.limit}\n")
    return EXIT_OK


def cmd_bench(
    config: RunConfig,
    limits: Sequence[int],
    oracle_cutoff: int,
    runs: int = 1,
    stream: TextIO = sys.stdout,
) -> list[dict]:
    """Wall times of the amortized path (and, below the cutoff, the oracle path).

    Emits one CSV row per limit; times are averaged over ``runs`` passes.
    """
    datum = datum_from_config(config)
    rows = []
    with_oracle = oracle_cutoff > 0
    stream.write("X,amortized_s,oracle_s\n" if with_oracle else "X,amortized_s\n")
    for limit in limits:
        amortized_t = _mean_time(
            lambda: traces(datum, limit, forest_bits=config.forest_bits), runs
        )
        row = {"X": limit, "amortized_s": amortized_t}
        if with_oracle and limit <= oracle_cutoff:
            ps = good_primes(datum, limit)
            row["oracle_s"] = _mean_time(
                lambda: [trace_mod_p_oracle(datum, p) for p in ps], runs
            )
        rows.append(row)
        if with_oracle:
            oracle_s = f"{row['oracle_s']:.4f}" if "oracle_s" in row else ""
            stream.write(f"{limit},{amortized_t:.4f},{oracle_s}\n")
        else:
            stream.write(f"{limit},{amortized_t:.4f}\n")
        stream.flush()
    return rows


def _mean_time(fn, runs: int) -> float:
    total = 0.0
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        total += time.perf_counter() - t0
    return total / runs


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(tok) for tok in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad fraction list {text!r}: {exc}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}: {exc}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad fraction {text!r}: {exc}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgm-trace", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, with_limit=True):
        sp.add_argument("--alpha", type=_fraction_list, help="comma-separated fractions, e.g. 1/4,1/2,1/2,3/4")
        sp.add_argument("--beta", type=_fraction_list)
        sp.add_argument("--cyclo-a", type=_int_list, help="cyclotomic indices, e.g. 4,2,2")
        sp.add_argument("--cyclo-b", type=_int_list)
        sp.add_argument("--z", type=_fraction, required=True)
        if with_limit:
            sp.add_argument("--limit", type=int, required=True, help="prime bound X (>= 3)")
        sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        sp.add_argument("--lift", action="store_true", help="attach the weight-1 integer lift")
        sp.add_argument("--show-skipped", action="store_true")
        sp.add_argument("--threads", type=int, default=1, metavar="N")
        sp.add_argument("--forest-bits", type=int, default=DEFAULT_FOREST_BITS, metavar="N")
        sp.add_argument("--output", default=None, metavar="PATH")

    add_common(sub.add_parser("compute", help="amortized traces for all good p <= limit"))
    add_common(sub.add_parser("oracle", help="direct per-prime traces (quadratic baseline)"))
    add_common(sub.add_parser("verify", help="compare the amortized path against the oracle"))
    bench = sub.add_parser("bench", help="wall-time table of both paths")
    add_common(bench, with_limit=False)
    bench.add_argument("--limits", type=_int_list, default=DEFAULT_BENCH_LIMITS)
    bench.add_argument("--oracle-cutoff", type=int, default=1 << 14)
    bench.add_argument("--runs", type=int, default=1)
    return parser


def _config_from_args(args) -> RunConfig:
    limit = getattr(args, "limit", 3)
    if limit < 3:
        raise DatumError("--limit must be at least 3")
    if args.threads < 1:
        raise DatumError("--threads must be at least 1")
    return RunConfig(
        z=args.z,
        limit=limit,
        alpha=args.alpha,
        beta=args.beta,
        cyclo_a=args.cyclo_a,
        cyclo_b=args.cyclo_b,
        format=args.format,
        lift=args.lift,
        show_skipped=args.show_skipped,
        threads=args.threads,
        forest_bits=args.forest_bits,
        output=args.output,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = _config_from_args(args)
        sink = open(config.output, "w") if config.output else nullcontext(sys.stdout)
        with sink as stream:
            if args.command in ("compute", "oracle"):
                records = list(cmd_compute(config, use_oracle=args.command == "oracle"))
                skipped = None
                if config.show_skipped:
                    datum = datum_from_config(config)
                    skipped = [
                        pc for pc in classify_primes(datum, config.limit) if pc.kind != GOOD
                    ]
                write_records(records, config, stream, skipped)
                return EXIT_OK
            if args.command == "verify":
                return cmd_verify(config, stream)
            if args.command == "bench":
                cmd_bench(config, args.limits, args.oracle_cutoff, args.runs, stream)
                return EXIT_OK
            raise AssertionError(f"unhandled command {args.command}")
    except (DatumError, ValueError) as exc:
        sys.stderr.write(f"hgm-trace: error: {exc}\n")
        return EXIT_USAGE
    except InvariantViolation as exc:
        sys.stderr.write(f"hgm-trace: internal invariant violated: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
