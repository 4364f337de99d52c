"""Command-line interface.

Exit codes: 0 all checks passed, 1 a mathematical check failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, constructions, counting, degeneracy
from .grid import Axis, GridSpec
from .polyring import ParseError, parse_poly

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _poly(args, bivariate=False):
    variables = args.vars.split(",") if getattr(args, "vars", None) else None
    p = parse_poly(args.poly, variables)
    solve = getattr(args, "solve", None)
    if solve:
        p = degeneracy.solve_linear_variable(p, solve)
    if bivariate and len(p.variables) != 2:
        raise UsageError(f"expected a bivariate polynomial, got variables {list(p.variables)}"
                         + ("" if solve else "; pass --solve to eliminate one"))
    return p


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    c = constructions.build(args.family, n=args.n, m=args.m, M=args.M)
    if args.format == "json":
        doc = c.metadata()
        doc["tuples"] = None if c.tuples is None else c.tuples.tolist()
        _emit(json.dumps(doc, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    _emit(c.to_csv(), args.out)
    if args.out:
        Path(args.out).with_suffix(".json").write_text(c.sidecar_json(), encoding="utf-8")
    return EXIT_OK


def cmd_verify(args) -> int:
    c = constructions.build(args.family, n=args.n, m=args.m, M=args.M)
    rep = constructions.verify_construction(c)
    _emit(json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_count(args) -> int:
    if args.family:
        if args.n is None:
            raise UsageError("--family needs --n")
        rep = counting.count_difference_structure(args.family, args.n, workers=args.workers)
    else:
        if not (args.poly and args.grid):
            raise UsageError("count needs --poly and --grid (or --family and --n)")
        F = parse_poly(args.poly, args.vars.split(",") if args.vars else None)
        grid = GridSpec.parse(args.grid)
        method = args.method
        if method == "auto":
            method = "solved" if args.solve else "bruteforce"
        if method == "solved":
            if not args.solve:
                raise UsageError("--method solved needs --solve VAR")
            rep = counting.count_solved(F, grid, args.solve, budget=args.budget, workers=args.workers)
        elif method == "bruteforce":
            rep = counting.count_bruteforce(F, grid, budget=args.budget, workers=args.workers)
        else:
            raise UsageError("--method difference needs --family")
    if args.format == "json":
        _emit(rep.to_json(timings=args.timings) + "\n", args.out)
    elif args.format == "csv":
        import io

        buf = io.StringIO()
        counting.write_csv([rep], buf, timings=args.timings)
        _emit(buf.getvalue(), args.out)
    else:
        _emit(f"{rep.count}\n", args.out)
    return EXIT_OK


def cmd_image(args) -> int:
    f = _poly(args, bivariate=True)
    A = Axis.interval(1, args.n)
    if args.graph == "main":
        G = constructions.gen_graph_G(args.n)
        rep = counting.image_along_edges(f, A, G.tuples)
    else:
        rep = counting.image_along_edges(f, A, "complete")
    if args.format == "json":
        _emit(rep.to_json() + "\n", args.out)
    else:
        _emit(f"{rep.distinct_values} distinct values on {rep.edge_count} edges\n", args.out)
    return EXIT_OK


def cmd_degeneracy(args) -> int:
    f = _poly(args, bivariate=True)
    try:
        r = degeneracy.derivative_test(f)
    except degeneracy.PreconditionError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit(r.to_json() + "\n", args.out)
        return EXIT_OK
    lines = [f"{r.verdict}: {r.label}", f"f = {f}", f"numerator: {r.numerator}",
             f"denominator: {r.denominator}"]
    if r.vanishing_line:
        lines.append(f"numerator vanishes only on the line {r.vanishing_line}")
    for a, b in r.vanishing_samples:
        lines.append(f"  zero at ({a}, {b})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    f = _poly(args, bivariate=True)
    a = degeneracy.decompose_additive(f)
    m = degeneracy.decompose_multiplicative(f)
    doc = {"polynomial": str(f),
           "additive": None if a is None else a.to_dict(),
           "multiplicative": None if m is None else m.to_dict()}
    if args.format == "json":
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    else:
        def show(d):
            return "none" if d is None else f"g(t) = {d['g']}, h = {d['h']}, k = {d['k']}"
        _emit(f"f = {f}\nadditive: {show(doc['additive'])}\nmultiplicative: {show(doc['multiplicative'])}\n",
              args.out)
    return EXIT_OK


def cmd_fit(args) -> int:
    ns = analysis.geometric_schedule(args.min_n, args.max_n)
    pts = analysis.count_series(args.family, ns, workers=args.workers)
    fit = analysis.fit_exponent(pts)
    if args.format == "csv":
        _emit(analysis.fit_csv(fit), args.out)
    else:
        doc = {"family": args.family, **fit.to_dict()}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def cmd_suite(args) -> int:
    fams = args.families.split(",") if args.families else list(analysis.SUITE_FAMILIES)
    fams = [f for f in fams if f]
    bundle = analysis.run_paper_suite(args.max_n, fams, seed=args.seed, min_n=args.min_n,
                                      workers=args.workers)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bundle.json").write_text(bundle.to_json(), encoding="utf-8")
        (out / "fits.csv").write_text(bundle.plot_csv(), encoding="utf-8")
        reports = [r for f in bundle.families for r in f.counts]
        counting.write_csv(reports, out / "counts.csv", timings=args.timings)
    else:
        sys.stdout.write(bundle.to_json())
    for f in bundle.families:
        slope = "" if f.fit is None else f" slope={f.fit.slope:.4f} r2={f.fit.r_squared:.6f}"
        print(f"{'PASS' if f.passed else 'FAIL'} {f.family}{slope}", file=sys.stderr)
    return EXIT_OK if bundle.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extremal", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt_default, fmt_choices=("csv", "json")):
        sp.add_argument("--format", choices=fmt_choices, default=fmt_default,
                        help=f"output format (default: {fmt_default})")
        sp.add_argument("--out", help="write to this path instead of stdout")

    def workers(sp):
        sp.add_argument("--workers", type=int, default=1, help="parallel chunks (default: 1)")

    sp = sub.add_parser("construct", help="emit a construction as CSV (+ JSON sidecar with --out)")
    sp.add_argument("family", choices=constructions.FAMILIES)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--M", type=int)
    common(sp, "csv")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check distinctness, grid and zero-set membership")
    sp.add_argument("family", choices=constructions.FAMILIES)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--M", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("count", help="count zeros of a polynomial on a grid")
    sp.add_argument("--poly", help="polynomial expression, e.g. '(x-y)^2+x-z'")
    sp.add_argument("--vars", help="comma-separated variable order (default: order of appearance)")
    sp.add_argument("--grid", help="axes like '1..4,1..4,{1,2,5}'")
    sp.add_argument("--solve", help="variable to solve for (enables the solved counter)")
    sp.add_argument("--method", choices=("auto", "bruteforce", "solved", "difference"), default="auto")
    sp.add_argument("--family", choices=counting.DIFFERENCE_FAMILIES,
                    help="use the difference-structure counter on [1,n]^m")
    sp.add_argument("--n", type=int)
    sp.add_argument("--budget", type=int, default=None,
                    help=f"max evaluations (default: $EXTREMAL_BUDGET or {counting.DEFAULT_BUDGET})")
    sp.add_argument("--timings", action="store_true", help="include elapsed milliseconds")
    workers(sp)
    common(sp, "text", ("text", "csv", "json"))
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("image", help="distinct values of f(x,y) along the graph or on A x A")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--vars")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--graph", choices=("main", "complete"), default="main")
    common(sp, "text", ("text", "json"))
    sp.set_defaults(func=cmd_image)

    sp = sub.add_parser("degeneracy", help="derivative test on a bivariate (or solved) polynomial")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--vars")
    sp.add_argument("--solve", help="solve F = 0 for this variable first")
    common(sp, "text", ("text", "json"))
    sp.set_defaults(func=cmd_degeneracy)

    sp = sub.add_parser("decompose", help="additive / multiplicative decomposition (degree <= 2)")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--vars")
    sp.add_argument("--solve")
    common(sp, "text", ("text", "json"))
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("fit", help="log-log exponent fit over a power-of-two schedule")
    sp.add_argument("--family", choices=analysis.FIT_FAMILIES, required=True)
    sp.add_argument("--min-n", type=int, default=512)
    sp.add_argument("--max-n", type=int, default=8192)
    workers(sp)
    common(sp, "json")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("suite", help="run the full verification bundle")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--min-n", type=int, default=None, help="default: max-n / 16")
    sp.add_argument("--families", help=f"comma list from {','.join(analysis.SUITE_FAMILIES)} (default: all)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="directory for bundle.json, fits.csv, counts.csv")
    sp.add_argument("--timings", action="store_true")
    workers(sp)
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) is not None and getattr(args, "workers", 1) < 1:
        parser.error("--workers must be at least 1")
    try:
        return args.func(args)
    except (UsageError, ParseError, ValueError, counting.BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
