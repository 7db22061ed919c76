"""``uqf`` command line tool.

Exit codes: 0 success, 2 usage or invalid input, 3 budget or search cap
exceeded, 4 a certified inequality failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .errors import (BudgetExceeded, InequalityViolation, InternalConventionError,
                     InvalidInput, SearchExhausted)

EXIT_USAGE, EXIT_BUDGET, EXIT_VIOLATION = 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    threads: int = 0
    precision_bits: int = 256
    output_format: str = "csv"
    budget: int = 10 ** 7


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(rows: list[dict], cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    if cfg.output_format == "json":
        payload = rows[0] if len(rows) == 1 else rows
        out.write(json.dumps(payload, indent=2, default=str) + "\n")
        return
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0].keys()), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in r.items()})


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# Commands ------------------------------------------------------------------------------------

def cmd_cf(args, cfg):
    from .surd_cf import expand, make_xi, max_odd_in

    cf = expand(make_xi(args.D))
    u, j = max_odd_in(cf)
    _emit([{"D": args.D, "expansion": str(cf), "preperiod_length": cf.t,
            "period_length": cf.s, "u": u, "witness_index": j}], cfg)


def cmd_survey(args, cfg):
    from .survey import census, corollary_bound, corollary_bound_man

    count = census(args.xmax, args.bound_b, args.kind, args.squarefree, cfg.threads)
    row = {"X": args.xmax, "B": args.bound_b, "kind": args.kind,
           "squarefree": args.squarefree, "count": count}
    if args.bound_b >= 2 and args.xmax >= 2:
        fn = corollary_bound_man if args.man else corollary_bound
        rep = fn(args.xmax, args.bound_b, count=count, bits=cfg.precision_bits)
        row.update(variant="man" if args.man else "corollary", bound=rep.to_json()["bound"],
                   bound_precision_bits=cfg.precision_bits, precondition_ok=rep.precondition_ok)
    else:
        row.update(variant="none", bound="", bound_precision_bits=cfg.precision_bits,
                   precondition_ok=False)
    _emit([row], cfg)


def cmd_table(args, cfg):
    from .survey import rank_table_csv, rank_table

    if cfg.output_format == "json":
        rows = [rec.__dict__ for rec in rank_table(args.xmax, args.m, cfg.threads)]
        sys.stdout.write(json.dumps(rows) + "\n")
    else:
        sys.stdout.write(rank_table_csv(args.xmax, args.m, cfg.threads))


def cmd_exclude(args, cfg):
    from .survey import exclusion_count

    rep = exclusion_count(args.R, args.m, args.xmax, cfg.precision_bits, cfg.threads)
    _emit([rep.to_json()], cfg)


def cmd_vectors(args, cfg):
    from .lattice import bound_C, count_vectors, read_gram

    G = read_gram(args.gram)
    n = count_vectors(G, args.n)
    b = bound_C(G.r, args.n, G.det, cfg.precision_bits)
    _emit([{"r": G.r, "det": G.det, "n": args.n, "count": n, "bound_C": str(b),
            "bound_precision_bits": b.precision_bits}], cfg)
    if n > b.hi:
        raise InequalityViolation(f"N({args.n}) = {n} exceeds C = {b}")


def cmd_bound(args, cfg):
    from .lattice import bound_B, bound_C, bound_C_simplified

    rows = []
    if args.R is not None:
        if args.m is None:
            raise InvalidInput("--R needs --m")
        b = bound_B(args.R, args.m, cfg.precision_bits)
        rows.append({"R": args.R, "m": args.m, "bound_B": str(b),
                     "precision_bits": b.precision_bits})
    elif args.r is not None and args.n is not None:
        b = bound_C(args.r, args.n, args.det, cfg.precision_bits)
        row = {"r": args.r, "n": args.n, "det": args.det, "bound_C": str(b),
               "precision_bits": b.precision_bits}
        if args.simplified:
            row["bound_C_simplified"] = str(
                bound_C_simplified(args.r, args.n, args.det, cfg.precision_bits))
        rows.append(row)
    else:
        raise InvalidInput("give --r and --n, or --R and --m")
    _emit(rows, cfg)


def cmd_rank(args, cfg):
    from .surd_cf import max_odd_coefficient
    from .survey import min_rank_classical, min_rank_general

    if (args.d is None) == (args.u is None):
        raise InvalidInput("give exactly one of --d or --u")
    u = args.u if args.u is not None else max_odd_coefficient(args.d)[0]
    row = {"D": args.d if args.d is not None else "", "u": u, "m": args.m,
           "rank_lb_classical": min_rank_classical(u, args.m),
           "rank_lb_general": min_rank_general(u)}
    _emit([row], cfg)


def cmd_discrepancy(args, cfg):
    from .equidist import discrepancy, erdos_turan_rhs, fractional_count, stepIII_bound

    a, b = args.a, args.b
    count = fractional_count(args.kind, args.xmax, a, b)
    disc = discrepancy(args.kind, args.xmax, a, b)
    bound = stepIII_bound(args.kind, args.xmax, cfg.precision_bits)
    row = {"kind": args.kind, "X": args.xmax, "a": _frac(a), "b": _frac(b), "count": count,
           "discrepancy": _frac(disc), "stepIII_bound": str(bound)}
    violated = abs(disc) > bound.hi
    if args.et_k:
        et = erdos_turan_rhs(args.kind, args.xmax, args.et_k, cfg.precision_bits,
                             threads=cfg.threads)
        row.update(et_k=args.et_k, erdos_turan_rhs=str(et))
        violated = violated or abs(disc) > et.hi
    _emit([row], cfg)
    if violated:
        raise InequalityViolation(f"|D(X,[a,b])| = {abs(disc)} exceeds a certified bound")


def cmd_cover(args, cfg):
    from .measure import build_cover, cover_contains
    from .surd_cf import make_xi

    cover = build_cover(args.b, args.n, args.l, budget=cfg.budget)
    info = cover.to_json()
    if args.check_d is not None:
        info["check_D"] = args.check_d
        info["contains_frac_xi"] = cover_contains(cover, make_xi(args.check_d).frac())
    if cfg.output_format == "json":
        _emit([info], cfg)
    else:
        info.pop("intervals")
        info.update(info.pop("params"))
        _emit([info], cfg)


def cmd_qsum(args, cfg):
    from .measure import qsum_truncated, qsum_upper_bound

    # exact partial sums have denominators with thousands of digits
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    try:
        val, exact = qsum_truncated(args.n, args.k, budget=min(cfg.budget, 10 ** 6)), True
    except BudgetExceeded:
        val, exact = qsum_upper_bound(args.n, args.k, budget=max(cfg.budget, 10 ** 10)), False
    _emit([{"N": args.n, "K": args.k, "value": _frac(val), "approx": float(val),
            "exact": exact}], cfg)
    if val >= 2:
        raise InequalityViolation(f"partial sum {float(val)} is not below 2")


def cmd_bench(args, cfg):
    from . import bench

    rows = bench.run(census_x=args.census_x, threads=cfg.threads or 1)
    _emit(rows, cfg)


# Parser -------------------------------------------------------------------------------------

def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--threads", type=int, default=d(0), help="worker threads (0 = all CPUs)")
    p.add_argument("--precision", type=int, default=d(256), help="interval precision in bits")
    p.add_argument("--format", choices=["csv", "json"], default=d("csv"))
    p.add_argument("--budget", type=int, default=d(10 ** 7), help="combinatorial size cap")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uqf", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    _global_flags(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cf", parents=[common], help="continued fraction of xi_D")
    s.add_argument("D", type=int)
    s.set_defaults(func=cmd_cf)

    s = sub.add_parser("survey", parents=[common], help="bounded-digit census with bound report")
    s.add_argument("--xmax", type=int, required=True)
    s.add_argument("--bound-b", type=int, required=True)
    s.add_argument("--kind", choices=["xi", "sqrt_all", "half_all"], default="xi")
    s.add_argument("--squarefree", action="store_true")
    s.add_argument("--man", action="store_true", help="use the variant with the weaker precondition")
    s.set_defaults(func=cmd_survey)

    s = sub.add_parser("table", parents=[common], help="per-D rank lower bounds as CSV")
    s.add_argument("--xmax", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("exclude", parents=[common], help="fields not excluded for rank R")
    s.add_argument("--R", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--xmax", type=int, required=True)
    s.set_defaults(func=cmd_exclude)

    s = sub.add_parser("vectors", parents=[common], help="count vectors of norm n")
    s.add_argument("--gram", required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_vectors)

    s = sub.add_parser("bound", parents=[common], help="short-vector bounds C(r,n) and B(R,m)")
    s.add_argument("--r", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--det", type=int, default=1)
    s.add_argument("--R", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--simplified", action="store_true")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("rank", parents=[common], help="rank lower bounds from u")
    s.add_argument("--d", type=int)
    s.add_argument("--u", type=int)
    s.add_argument("--m", type=int, default=1)
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("discrepancy", parents=[common], help="fractional-part discrepancy")
    s.add_argument("--xmax", type=int, required=True)
    s.add_argument("--a", type=_rational, required=True)
    s.add_argument("--b", type=_rational, required=True)
    s.add_argument("--kind", choices=["sqrt", "half"], default="sqrt")
    s.add_argument("--et-k", type=int, default=0)
    s.set_defaults(func=cmd_discrepancy)

    s = sub.add_parser("cover", parents=[common], help="explicit interval cover")
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--check-d", type=int)
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("qsum", parents=[common], help="truncated sum of 1/q_N^2")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_qsum)

    s = sub.add_parser("bench", parents=[common], help="numba vs numpy timings")
    s.add_argument("--census-x", type=int, default=200_000)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    from .parallel import resolve_threads

    try:
        cfg = RunConfig(threads=resolve_threads(args.threads), precision_bits=args.precision,
                        output_format=args.format, budget=args.budget)
        if cfg.precision_bits < 64:
            raise InvalidInput("--precision must be >= 64")
        args.func(args, cfg)
    except (InequalityViolation, InternalConventionError) as exc:
        print(f"uqf: inequality violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (BudgetExceeded, SearchExhausted) as exc:
        print(f"uqf: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, ValueError, OSError) as exc:
        print(f"uqf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
