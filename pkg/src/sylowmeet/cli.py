"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 a size guard refused the run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import bounds, census, estimator
from .errors import GuardError


def _rational(q) -> str:
    return str(Fraction(q))


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _n_range(args, parser) -> list[int]:
    if args.n is not None:
        if args.n_min is not None or args.n_max is not None:
            parser.error("use either --n or --n-min/--n-max")
        ns = [args.n]
    elif args.n_min is not None and args.n_max is not None:
        if args.n_min > args.n_max:
            parser.error("--n-min must not exceed --n-max")
        ns = list(range(args.n_min, args.n_max + 1))
    else:
        parser.error("--n or both --n-min and --n-max are required")
    if ns[0] < 1:
        parser.error("n must be positive")
    return ns


def cmd_estimate(args, parser) -> str:
    if args.n is None:
        parser.error("--n is required")
    if args.n < 1:
        parser.error("n must be positive")
    if not args.exhaustive:
        if args.seed is None:
            parser.error("--seed is required unless --exhaustive is given")
        if args.samples < 1:
            parser.error("--samples must be positive")
    report = estimator.estimate_trivial(
        args.n,
        args.samples,
        args.seed,
        args.mode,
        args.backend,
        exhaustive=args.exhaustive,
        x_space=args.x_space,
        workers=args.workers,
    )
    if args.format == "csv":
        d = report.to_dict()
        return _csv([list(d.values())], list(d.keys()))
    return report.to_json()


def cmd_census(args, parser) -> str:
    by = "cycle_type" if args.cycle_type else "support"
    rows = []
    for n in _n_range(args, parser):
        rows.extend(census.census_rows(n, args.subset, by))
    if args.format == "json":
        return _json([dict(zip(("n", "subset", "support_or_partition", "count"), r)) for r in rows])
    return _csv(rows, ("n", "subset", "support_or_partition", "count"))


def cmd_wdist(args, parser) -> str:
    if args.n is None or args.n < 1:
        parser.error("--n is required and must be positive")
    if args.exact:
        pmf = estimator.w_pmf_exact(args.n)
        rows = [(k, _rational(p), float(p)) for k, p in pmf.rows()]
    else:
        if args.seed is None:
            parser.error("--seed is required unless --exact is given")
        if args.samples < 1:
            parser.error("--samples must be positive")
        pmf = estimator.w_pmf_empirical(args.n, args.samples, args.seed, workers=args.workers)
        rows = [(k, repr(p), p) for k, p in pmf.rows()]
    if args.format == "json":
        return _json({
            "n": args.n,
            "exact": pmf.exact,
            "pmf": [{"k": k, "probability": p, "probability_float": x} for k, p, x in rows],
        })
    return _csv(rows, ("k", "probability", "probability_float"))


def cmd_expect(args, parser) -> str:
    out = []
    for n in _n_range(args, parser):
        e = estimator.expected_non_a(n)
        out.append({
            "n": n,
            "expected_non_a": _rational(e),
            "expected_non_a_float": float(e),
            "n_times_expected": float(n * e),
        })
    if args.format == "csv":
        return _csv([list(d.values()) for d in out], list(out[0].keys()))
    return _json(out[0] if len(out) == 1 else out)


def cmd_bounds(args, parser) -> str:
    rows = []
    for n in _n_range(args, parser):
        if args.s is not None:
            if args.s < 2 or args.s % 2 or args.s > n:
                parser.error("--s must be even with 2 <= s <= n")
            supports = [args.s]
        else:
            supports = range(2, n + 1, 2)
        for s in supports:
            r = bounds.grid_row(n, s)
            small = r["bound_small_s"]
            rows.append((
                r["n"], r["s"], r["census_p_minus_a"], _rational(r["big_sum"]),
                "NA" if small is None else _rational(small), repr(r["bound_gf"]),
                r["applicable_regime"],
            ))
    header = ("n", "s", "census_p_minus_a", "big_sum", "bound_small_s", "bound_gf", "applicable_regime")
    if args.format == "json":
        return _json([dict(zip(header, r)) for r in rows])
    return _csv(rows, header)


COMMANDS = {
    "estimate": (cmd_estimate, "estimate Pr(P ∩ P^x = 1) by sampling or exhaustion", "json"),
    "census": (cmd_census, "exact element counts of A, P or P minus A", "csv"),
    "wdist": (cmd_wdist, "distribution of W = rank of A ∩ A^x", "csv"),
    "expect": (cmd_expect, "exact E|P ∩ P^x minus A| from the class sum", "json"),
    "bounds": (cmd_bounds, "counting bounds for elements of P minus A by support", "csv"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sylowmeet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, fmt) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.add_argument("--n", type=int, default=None, help="degree")
        if name in ("census", "expect", "bounds"):
            p.add_argument("--n-min", type=int, default=None, help="first degree of a range")
            p.add_argument("--n-max", type=int, default=None, help="last degree of a range")
        if name in ("estimate", "wdist"):
            p.add_argument("--samples", type=int, default=100000, help="number of sampled x")
            p.add_argument("--seed", type=int, default=None, help="random seed, required when sampling")
            p.add_argument("--workers", type=int, default=1, help="sampling processes; output does not depend on it")
        if name == "estimate":
            p.add_argument("--mode", choices=estimator.MODES, default="symmetric",
                           help="symmetric: P ∩ P^x = 1; alternating: its even part is trivial")
            p.add_argument("--backend", choices=estimator.BACKENDS, default="fast",
                           help="fast: W statistic; exact: full intersection (n <= 16)")
            p.add_argument("--exhaustive", action="store_true", help="use every x instead of sampling")
            p.add_argument("--x-space", choices=("symmetric", "alternating"), default="symmetric",
                           help="draw x from S_n or from A_n")
        if name == "census":
            p.add_argument("--subset", choices=("A", "P", "PminusA"), default="P", help="which subset to count")
            p.add_argument("--cycle-type", action="store_true", help="count by cycle type instead of support")
        if name == "wdist":
            p.add_argument("--exact", action="store_true", help="exact rational law instead of sampling")
        if name == "bounds":
            p.add_argument("--s", type=int, default=None, help="single even support (default: all)")
        p.add_argument("--format", choices=("json", "csv"), default=fmt, help="output format")
        p.add_argument("--out", default=None, help="output path; stdout when omitted")
        p.set_defaults(_parser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        text = fn(args, args._parser)
    except GuardError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
