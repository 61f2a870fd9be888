"""Command-line front end for the verification suites and sweeps.

Usage::

    pfaffian-verify verify lemma47 --n 6 --r 2 --seed 1 --trials 100000
    pfaffian-verify verify thm72-slopes            # every spec of the default grid
    pfaffian-verify sweep composite --n 5 --r 1 --c 1.0 --out composite.csv
    pfaffian-verify sweep wedge-det --n 4 --x 1.0 --rank 2 --out det.csv

Exit status: 0 pass, 1 fail, 2 unsupported regime, 3 usage error.
"""
from __future__ import annotations

import argparse
import sys

from .skew import read_matrix
from .suites import DEFAULT_GRID, SUITES, UsageError, emit_sweep, run_suite
from .variety import VarietySpec

USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser():
    parser = _Parser(prog="pfaffian-verify", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ver = sub.add_parser("verify", help="run a seeded verification suite")
    ver.add_argument("suite", choices=sorted(SUITES))
    ver.add_argument("--n", type=int, help="matrix size (omit with --r to run the default grid)")
    ver.add_argument("--r", type=int, help="half-rank bound")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--trials", type=int, help="number of trials (suite default if omitted)")
    ver.add_argument("--tol", type=float, help="tolerance on max_defect (suite default if omitted)")
    ver.add_argument("--out", help="write the JSON report here instead of stdout")

    sw = sub.add_parser("sweep", help="write a plot-ready CSV sweep")
    sw.add_argument("kind", choices=["composite", "slope", "wedge-det"])
    sw.add_argument("--n", type=int)
    sw.add_argument("--r", type=int)
    sw.add_argument("--k", type=int, help="slope: half-rank of the base point")
    sw.add_argument("--c", type=_floats, help="composite: level labels c_1,...,c_r")
    sw.add_argument("--x", type=_floats, help="wedge-det: pairs x_1,...,x_r")
    sw.add_argument("--b", help="normal block as a skew-matrix record (JSON)")
    sw.add_argument("--rank", type=int, default=2, help="wedge-det: rank of a random normal block")
    sw.add_argument("--member", action=argparse.BooleanOptionalAction, default=True)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--t-max", type=float, default=3.0)
    sw.add_argument("--points", type=int)
    sw.add_argument("--out", required=True)
    return parser


def _verify(args):
    if (args.n is None) != (args.r is None):
        raise UsageError("give both --n and --r, or neither for the default grid")
    specs = DEFAULT_GRID if args.n is None else [(args.n, args.r)]
    reports = [run_suite(args.suite, VarietySpec(*s), args.seed, args.trials, args.tol) for s in specs]
    for rep in reports:
        print(f"{rep.suite} (n={rep.n}, r={rep.r}): {rep.verdict}  violations={rep.violations} "
              f"max_defect={rep.max_defect:.3g} tol={rep.tolerance:.3g} [{rep.elapsed:.2f}s]", file=sys.stderr)
    if len(reports) == 1:
        text = reports[0].to_json()
    else:
        text = "[\n" + ",\n".join(rep.to_json() for rep in reports) + "\n]"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return max(rep.exit_code for rep in reports)


def _sweep(args):
    params = {"seed": args.seed}
    if args.b is not None:
        params["b"] = read_matrix(args.b)
    if args.kind == "composite":
        if args.n is None or args.r is None or args.c is None:
            raise UsageError("composite needs --n, --r and --c")
        params.update(n=args.n, r=args.r, c=args.c, t_max=args.t_max)
    elif args.kind == "slope":
        if args.n is None or args.r is None or args.k is None:
            raise UsageError("slope needs --n, --r and --k")
        params.update(n=args.n, r=args.r, k=args.k, member=args.member)
    else:
        if args.x is None or (args.n is None and args.b is None):
            raise UsageError("wedge-det needs --x and either --n or --b")
        params.update(x=args.x, n=args.n, rank=args.rank)
    if args.points is not None:
        params["points"] = args.points
    path = emit_sweep(args.kind, params, args.out)
    print(f"wrote {path}", file=sys.stderr)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _verify(args) if args.command == "verify" else _sweep(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"pfaffian-verify: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
