"""Command-line front end.

Every subcommand builds a list of rows and prints it as CSV (default) or
JSON.  Exit codes: 0 success, 1 domain failure (no solution, tolerance
breach, branch crossing), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import bratu, classic_problems as cp, kinetics, oracle
from .bratu import Source
from .errors import BranchCrossing, NoSolution, RatioOutOfRange, RitzError


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None
    precision: int = 10

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if not 4 <= self.precision <= 17:
            raise ValueError("precision must be in [4, 17]")

    def num(self, x):
        if isinstance(x, (bool, np.bool_)) or x is None or isinstance(x, str):
            return x
        return format(float(x), f".{self.precision}g")


def render(rows: list[dict], out: OutputSpec) -> str:
    if out.format == "json":
        def conv(v):
            if isinstance(v, np.bool_):
                return bool(v)
            if isinstance(v, (str, bool, int)) or v is None:
                return v
            return float(out.num(v))
        return json.dumps([{k: conv(v) for k, v in r.items()} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: out.num(v) for k, v in r.items()})
    return buf.getvalue()


def emit(rows: list[dict], out: OutputSpec) -> None:
    text = render(rows, out)
    if out.path is None:
        sys.stdout.write(text)
        return
    # write next to the target, then rename
    d = os.path.dirname(os.path.abspath(out.path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ritz-", suffix=".tmp")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, out.path)


# -- argument types ---------------------------------------------------------

def _positive(s):
    v = float(s)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _order_ge1(s):
    v = float(s)
    if not v >= 1:
        raise argparse.ArgumentTypeError(f"reaction order must be >= 1, got {s}")
    return v


def _precision(s):
    v = int(s)
    if not 4 <= v <= 17:
        raise argparse.ArgumentTypeError("precision must be between 4 and 17")
    return v


def _grid(s):
    try:
        a, b, step = (float(x) for x in s.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like start:stop:step, got {s}") from None
    if not (0 < a <= b and step > 0):
        raise argparse.ArgumentTypeError("grid needs 0 < start <= stop and step > 0")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(n)]


def _sources(s):
    try:
        return [Source(x.strip()) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- bratu ------------------------------------------------------------------

def cmd_bratu(args, out):
    if args.action == "critical":
        rows = []
        for src in (Source.EXACT, Source.POLY, Source.SINE):
            c = bratu.critical_point(src)
            rows.append({"source": src.value, "param_c": c.param, "lambda_c": c.lam, "slope_c": c.slope})
        emit(rows, out)
    elif args.action == "branches":
        srcs = list(Source) if args.source == "all" else [Source(args.source)]
        rows, failures = [], []
        for src in srcs:
            try:
                br = bratu.branches_at(args.lam, src)
            except NoSolution as exc:
                failures.append(str(exc))
                continue
            for s in br.solutions():
                rows.append({"source": src.value, "lambda": args.lam, "branch": s.branch.value,
                             "param": s.param, "slope": s.slope, "at_fold": br.at_fold})
        if not rows:
            for f in failures:
                print(f, file=sys.stderr)
            return 1
        emit(rows, out)
    elif args.action == "series":
        s = bratu.perturbation_series(args.source, args.order)
        emit([{"power": j, "coefficient": float(c)} for j, c in enumerate(s.coeffs) if j > 0], out)
    elif args.action == "bifurcation":
        curves = bratu.bifurcation_dataset(args.sources, args.grid)
        emit([{"lambda": lam, "slope": sl, "branch": b, "source": src}
              for lam, sl, b, src in bratu.csv_rows(curves)], out)
    return 0


# -- kinetics ---------------------------------------------------------------

def cmd_kinetics(args, out):
    if args.action == "infer":
        try:
            n = kinetics.infer_order(args.t_half, args.t_quarter)
        except RatioOutOfRange as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        emit([{"t_half": args.t_half, "t_quarter": args.t_quarter, "order": n}], out)
        return 0
    if args.action == "errata":
        r = kinetics.he_erroneous_analysis(args.k, args.a)
        emit([
            {"quantity": "pole_time", "value": r.pole_time, "flag": "unphysical"},
            {"quantity": "half_time", "value": r.half_time, "flag": "unphysical"},
            {"quantity": "erroneous_variational_half_time", "value": r.erroneous_variational_half_time,
             "flag": "unphysical"},
            {"quantity": "variational_half_time", "value": r.variational_half_time, "flag": "corrected"},
            {"quantity": "exact_half_time", "value": r.exact_half_time, "flag": "exact"},
            {"quantity": "oracle_max_extent", "value": r.oracle_max_extent,
             "flag": "bounded" if r.oracle_bounded else "unbounded"},
        ], out)
        return 0
    spec = kinetics.ReactionSpec(args.n, args.k, args.a)
    if args.action == "halftimes":
        rows = []
        for src in (kinetics.Source.EXACT, kinetics.Source.VARIATIONAL):
            rows.append({
                "source": src.value,
                "t_half": kinetics.half_time(spec, src),
                "t_quarter": kinetics.partial_time(spec, 0.25, src),
                "ratio": kinetics.partial_time_ratio(spec, src),
                "eta": kinetics.variational_eta(spec) if src is kinetics.Source.VARIATIONAL else None,
            })
        emit(rows, out)
    elif args.action == "profile":
        exact = kinetics.profile(spec, "exact")
        var = kinetics.profile(spec, "variational")
        ts = np.linspace(0.0, args.t_end, args.points)
        emit([{"t": t, "exact": exact(t), "variational": var(t)} for t in ts], out)
    return 0


# -- classic ----------------------------------------------------------------

def cmd_classic(args, out):
    if args.action == "duffing":
        rep = cp.duffing_classify(cp.DuffingSpec(args.epsilon, args.amplitude))
        rows = [{"u": u, "kind": k.value, "center": rep.oscillation_center.value,
                 "separatrix": rep.separatrix, "energy": rep.energy} for u, k in rep.points]
        emit(rows, out)
    elif args.action == "lambert":
        spec = cp.LambertSpec(args.n, args.k, args.y0, args.yp0)
        lo, hi = cp.lambert_branch_interval(spec)
        if not lo < args.x < hi:
            edge = hi if args.x >= hi else lo
            print(f"error: BranchCrossing: z = y**n vanishes at x = {edge:.6g}, before x = {args.x:g}",
                  file=sys.stderr)
            return 1
        xs = np.linspace(0.0, args.x, args.samples)
        try:
            ders = [cp.lambert_derivatives(spec, x) for x in xs]
        except BranchCrossing as exc:
            print(f"error: BranchCrossing: {exc}", file=sys.stderr)
            return 1
        rows = [{"x": x, "y": d[0], "residual": abs(cp.lambert_residual(spec, *d))}
                for x, d in zip(xs, ders)]
        emit(rows, out)
    elif args.action == "kdv":
        rep = cp.kdv_report(args.c)
        rows = [
            {"convention": "algebraic", "p": rep.algebraic.p, "q": rep.algebraic.q,
             "max_residual": rep.residual_algebraic},
            {"convention": "variational", "p": rep.variational.p, "q": rep.variational.q,
             "max_residual": rep.residual_variational},
            {"convention": "positive_p", "p": -rep.algebraic.p, "q": rep.algebraic.q,
             "max_residual": rep.residual_positive_p},
        ]
        emit(rows, out)
    return 0


def cmd_verify(args, out):
    cases = args.case or list(oracle.CASES)
    results = [oracle.verify_closed_form(c, args.perturb) for c in cases]
    emit([{"case": d.case, "discrepancy": d.value, "tolerance": d.tolerance,
           "status": "pass" if d.passed else "FAIL"} for d in results], out)
    return 0 if all(d.passed for d in results) else 1


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="output format (default: csv)")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--precision", type=_precision, default=10,
                        help="significant digits, 4-17 (default: 10)")

    p = argparse.ArgumentParser(prog="ritz", description="Ritz variational method versus exact and shooting solutions.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bratu", help="Bratu problem: folds, branches, series, bifurcation diagram")
    bs = b.add_subparsers(dest="action", required=True)
    bs.add_parser("critical", parents=[common], help="critical (param, lambda, slope) for each source")
    x = bs.add_parser("branches", parents=[common], help="solutions at a given lambda")
    x.add_argument("--lambda", dest="lam", type=_positive, required=True)
    x.add_argument("--source", choices=[s.value for s in Source] + ["all"], default="exact")
    x = bs.add_parser("series", parents=[common], help="u'(0) as a power series in lambda")
    x.add_argument("--source", choices=["exact", "poly", "sine"], default="exact")
    x.add_argument("--order", type=int, choices=range(1, 9), default=4, metavar="N", help="1-8 (default: 4)")
    x = bs.add_parser("bifurcation", parents=[common], help="CSV of slope at origin against lambda")
    x.add_argument("--grid", type=_grid, default=_grid("0.05:3.5:0.05"), help="start:stop:step (default 0.05:3.5:0.05)")
    x.add_argument("--sources", type=_sources, default=list(Source),
                   help="comma-separated subset of exact,poly,sine,shooting (default: all)")

    k = sub.add_parser("kinetics", help="nth-order reaction: half-times, order inference, errata")
    ks = k.add_subparsers(dest="action", required=True)
    for name, hlp in (("halftimes", "half and quarter times, exact and variational"),
                      ("profile", "extent of reaction against time")):
        x = ks.add_parser(name, parents=[common], help=hlp)
        x.add_argument("--n", type=_order_ge1, required=True, help="reaction order (>= 1)")
        x.add_argument("--k", type=_positive, default=1.0, help="rate constant (default: 1)")
        x.add_argument("--a", type=_positive, default=1.0, help="initial amount (default: 1)")
        if name == "profile":
            x.add_argument("--t-end", type=_positive, default=5.0)
            x.add_argument("--points", type=int, default=11)
    x = ks.add_parser("infer", parents=[common], help="reaction order from t_1/2 and t_1/4")
    x.add_argument("--t-half", type=_positive, required=True)
    x.add_argument("--t-quarter", type=_positive, required=True)
    x = ks.add_parser("errata", parents=[common], help="pole and negative half-time of the wrong n=2 formula")
    x.add_argument("--k", type=_positive, default=1.0)
    x.add_argument("--a", type=_positive, default=1.0)

    c = sub.add_parser("classic", help="Duffing, Lambert and KdV problems")
    cs = c.add_subparsers(dest="action", required=True)
    x = cs.add_parser("duffing", parents=[common], help="equilibria and oscillation centre")
    x.add_argument("--epsilon", type=float, required=True)
    x.add_argument("--amplitude", type=_positive, required=True)
    x = cs.add_parser("lambert", parents=[common], help="y(x) on [0, x] via z = y^n")
    x.add_argument("--n", type=_positive, required=True)
    x.add_argument("--k", type=_positive, required=True)
    x.add_argument("--y0", type=_positive, required=True)
    x.add_argument("--yp0", type=float, default=0.0)
    x.add_argument("--x", type=float, required=True, help="right end of the sample range")
    x.add_argument("--samples", type=int, default=11)
    x = cs.add_parser("kdv", parents=[common], help="soliton amplitude and width, both sign conventions")
    x.add_argument("--c", type=_positive, required=True, help="wave speed")

    v = sub.add_parser("verify", parents=[common], help="run every closed-form versus oracle check")
    v.add_argument("--case", action="append", choices=list(oracle.CASES), help="restrict to a case (repeatable)")
    v.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


COMMANDS = {"bratu": cmd_bratu, "kinetics": cmd_kinetics, "classic": cmd_classic, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = OutputSpec(args.format, args.out, args.precision)
    try:
        return COMMANDS[args.command](args, out)
    except RitzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
