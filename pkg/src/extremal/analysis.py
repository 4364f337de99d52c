"""Log-log exponent fits and the end-to-end verification suite."""

from __future__ import annotations

import csv
import io
import json
import random
import warnings
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import constructions as C
from .counting import (
    CountReport,
    count_bruteforce,
    count_difference_structure,
    count_solved,
    image_along_edges,
    sz_bound_check,
)
from .degeneracy import (
    NONZERO,
    ZERO,
    decompose_additive,
    decompose_multiplicative,
    derivative_test,
    solve_linear_variable,
)
from .grid import Axis, GridSpec
from .polyring import Polynomial, eval_poly, parse_poly

SUITE_FAMILIES = ("main-f", "degenerate-sum", "valtr-symmetric", "valtr-asymmetric", "graph-g", "mvar-t")

# explicit tuple verification is skipped above this many tuples
VERIFY_TUPLE_LIMIT = 2_000_000
# brute-force cross-checks stay below this many grid cells
ORACLE_CELL_LIMIT = 20_000_000


@dataclass
class ExponentFit:
    points: list
    slope: float
    intercept: float
    r_squared: float

    def predicted(self, n) -> float:
        return float(np.exp(self.intercept) * n ** self.slope)

    def to_dict(self) -> dict:
        return {
            "points": [[int(n), int(c)] for n, c in self.points],
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
        }


def fit_exponent(points) -> ExponentFit:
    """Least-squares line through ``(ln n, ln count)``.

    Zero counts are dropped with a warning; negative counts are an error.
    """
    pts = [(int(n), int(c)) for n, c in points]
    if any(c < 0 for _, c in pts):
        raise ValueError("counts must be non-negative")
    kept = [(n, c) for n, c in pts if c > 0]
    if len(kept) < len(pts):
        warnings.warn(f"dropped {len(pts) - len(kept)} zero count(s) from the fit", stacklevel=2)
    ns = {n for n, _ in kept}
    if len(ns) != len(kept):
        raise ValueError("n values must be distinct")
    if len(kept) < 2:
        raise ValueError("need at least two points with positive counts")
    if any(n <= 0 for n in ns):
        raise ValueError("n values must be positive")
    lx = np.log(np.array([n for n, _ in kept], dtype=float))
    ly = np.log(np.array([c for _, c in kept], dtype=float))
    A = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    ss_res = float((resid ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return ExponentFit(kept, float(slope), float(intercept), r2)


def geometric_schedule(min_n: int, max_n: int) -> list:
    """Powers of two in ``[min_n, max_n]``."""
    out = []
    n = 1
    while n <= max_n:
        if n >= min_n:
            out.append(n)
        n *= 2
    return out


def fit_csv(fit: ExponentFit) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "count", "fitted"])
    for n, c in fit.points:
        w.writerow([n, c, f"{fit.predicted(n):.6g}"])
    return buf.getvalue()


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class FamilyResult:
    family: str
    checks: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    constructions: list = field(default_factory=list)
    degeneracy: dict | None = None
    decompositions: dict | None = None
    fit: ExponentFit | None = None
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    def check(self, name, passed, **detail):
        self.checks.append(Check(name, bool(passed), detail))

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "counts": [r.to_dict() for r in self.counts],
            "constructions": self.constructions,
            "degeneracy": self.degeneracy,
            "decompositions": self.decompositions,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "errors": self.errors,
        }


@dataclass
class VerificationBundle:
    max_n: int
    seed: int
    families: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)

    def family(self, name) -> FamilyResult:
        for f in self.families:
            if f.family == name:
                return f
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "max_n": self.max_n,
            "seed": self.seed,
            "passed": self.passed,
            "families": [f.to_dict() for f in self.families],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def plot_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["family", "n", "count", "fitted"])
        for f in self.families:
            if f.fit is None:
                continue
            for n, c in f.fit.points:
                w.writerow([f.family, n, c, f"{f.fit.predicted(n):.6g}"])
        return buf.getvalue()


def _degeneracy_block(res: FamilyResult, f, expected: str):
    r = derivative_test(f)
    res.degeneracy = r.to_dict()
    res.check("derivative_test", r.verdict == expected, verdict=r.verdict, expected=expected)


def _decomposition_block(res: FamilyResult, f, expect_additive: bool, expect_mult: bool):
    a, m = decompose_additive(f), decompose_multiplicative(f)
    res.decompositions = {
        "additive": None if a is None else a.to_dict(),
        "multiplicative": None if m is None else m.to_dict(),
    }
    res.check("decompose_additive", (a is not None) == expect_additive, found=a is not None)
    res.check("decompose_multiplicative", (m is not None) == expect_mult, found=m is not None)


def _spot_check(res: FamilyResult, c: C.Construction, rng: random.Random, k: int = 16):
    """Re-check a few random tuples with scalar exact evaluation."""
    if c.tuples is None or c.size == 0 or not c.zero_set:
        return
    idx = sorted(rng.sample(range(c.size), min(k, c.size)))
    ok = all(eval_poly(c.polynomial, [int(v) for v in c.tuples[i]]) == 0 for i in idx)
    res.check(f"spot_check[{c.name} {c.params}]", ok, indices=idx)


def _verify_block(res: FamilyResult, c: C.Construction, rng, backend):
    rep = C.verify_construction(c, backend=backend)
    res.constructions.append(rep.to_dict())
    res.check(f"verify[{c.name} {c.params}]", rep.passed)
    _spot_check(res, c, rng)


def _suite_main_f(res, schedule, rng, workers, backend):
    F = C.main_polynomial()
    fits = []
    for n in schedule:
        rep = count_difference_structure("MainF", n, workers=workers, backend=backend)
        res.counts.append(rep)
        size = C.main_t_size(n)
        if size <= VERIFY_TUPLE_LIMIT:
            T = C.gen_main_T(n)
            _verify_block(res, T, rng, backend)
            size = T.size
        res.check(f"T_subset[n={n}]", rep.count >= size, count=rep.count, t_size=size)
        res.check(f"sz_bound[n={n}]", sz_bound_check(rep, 2), count=rep.count, bound=2 * n * n)
        fits.append((n, rep.count))
    n0 = schedule[0]
    if n0 ** 3 <= ORACLE_CELL_LIMIT:
        oracle = count_bruteforce(F, GridSpec.cube(1, n0, 3), workers=workers, backend=backend)
    else:
        oracle = count_solved(F, GridSpec.cube(1, n0, 3), "z", workers=workers, backend=backend)
    res.check(f"oracle[n={n0}]", oracle.count == res.counts[0].count, method=oracle.method, count=oracle.count)
    f = solve_linear_variable(F, "z")
    _degeneracy_block(res, f, NONZERO)
    _decomposition_block(res, f, False, False)
    return fits


def _suite_degenerate_sum(res, schedule, rng, workers, backend):
    S = parse_poly("x + y + z", ["x", "y", "z"])
    fits = []
    for n in schedule:
        grid = GridSpec([Axis.interval(1, n), Axis.interval(1, n), Axis.interval(-n, -1)])
        rep = count_solved(S, grid, "z", workers=workers, backend=backend)
        rep.family, rep.n = "DegenerateSum", n
        res.counts.append(rep)
        res.check(f"closed_form[n={n}]", rep.count == n * (n - 1) // 2, count=rep.count)
        res.check(f"sz_bound[n={n}]", sz_bound_check(rep, 1), count=rep.count, bound=n * n)
        fits.append((n, rep.count))
    f = solve_linear_variable(S, "z")
    _degeneracy_block(res, f, ZERO)
    _decomposition_block(res, f, True, False)
    return fits


def _suite_valtr_symmetric(res, schedule, rng, workers, backend):
    V = C.valtr_polynomial()
    fits = []
    for n in schedule:
        rep = count_difference_structure("ValtrSymmetric", n, workers=workers, backend=backend)
        res.counts.append(rep)
        size = C.valtr_symmetric_size(n)
        if size <= VERIFY_TUPLE_LIMIT:
            _, Q = C.gen_valtr("symmetric", n=n)
            _verify_block(res, Q, rng, backend)
            size = Q.size
        res.check(f"T_subset[n={n}]", rep.count >= size, count=rep.count, t_size=size)
        res.check(f"sz_bound[n={n}]", sz_bound_check(rep, 2), count=rep.count, bound=2 * n ** 3)
        fits.append((n, rep.count))
    n0 = schedule[0]
    if n0 ** 3 <= ORACLE_CELL_LIMIT:
        oracle = count_solved(V, GridSpec.cube(1, n0, 4), "t", workers=workers, backend=backend)
        res.check(f"oracle[n={n0}]", oracle.count == res.counts[0].count, method=oracle.method, count=oracle.count)
    xyz = ("x", "y", "z")
    sub = V.subs({"s": Polynomial.var(xyz, "x"), "t": Polynomial.var(xyz, "z")}, variables=xyz)
    res.check("substitution_s=x_t=z", sub == C.main_polynomial())
    return fits


def _suite_valtr_asymmetric(res, max_n, rng, workers, backend):
    V = C.valtr_polynomial()
    fits = []
    # M^2 * M^2 solved evaluations per M; the grid side in n-terms is M^(3/2)
    top = max(2, min(isqrt(isqrt(max_n)) * 2, 64))
    for M in geometric_schedule(2, top):
        grid, _ = C.gen_valtr("asymmetric", M=M)
        rep = count_solved(V, grid, "t", workers=workers, backend=backend)
        rep.family, rep.n = "ValtrAsymmetric", M
        res.counts.append(rep)
        fits.append((M, rep.count))
    return fits


def _suite_graph_g(res, schedule, rng, workers, backend):
    f = C.graph_polynomial()
    fits = []
    for n in schedule:
        G = C.gen_graph_G(n)
        _verify_block(res, G, rng, backend)
        img = image_along_edges(f, Axis.interval(1, n), G.tuples, backend=backend)
        res.check(f"edge_count[n={n}]", G.size == C.main_t_size(n), edges=G.size)
        res.check(f"image_bound[n={n}]", img.distinct_values <= n, distinct=img.distinct_values)
        fits.append((n, G.size))
    _degeneracy_block(res, f, NONZERO)
    _decomposition_block(res, f, False, False)
    return fits


def _suite_mvar_t(res, max_n, rng, workers, backend):
    fits_by_m = {}
    for m in (3, 4, 5):
        cap = {3: 1024, 4: 128, 5: 64}[m]
        sched = geometric_schedule(4, min(max_n, cap))
        pts = []
        for n in sched:
            _, T = C.gen_mvar_T(m, n)
            _verify_block(res, T, rng, backend)
            res.check(f"size[m={m},n={n}]", T.size == C.mvar_t_size(m, n), size=T.size)
            pts.append((n, T.size))
        fits_by_m[m] = pts
        if m == 3 and sched:
            n0 = min(sched[0], 16)
            grid = GridSpec.cube(-n0, 2 * n0, 3)
            F = C.mvar_polynomial(3)
            a = count_solved(F, grid, "x3", workers=workers, backend=backend).count
            b = count_bruteforce(F, grid, workers=workers, backend=backend).count
            res.check(f"oracle[m=3,n={n0}]", a == b, solved=a, brute=b)
    return fits_by_m.get(3, [])


def run_paper_suite(max_n: int, families=SUITE_FAMILIES, seed: int = 0, min_n: int | None = None,
                    workers: int = 1, backend: str | None = None) -> VerificationBundle:
    """Construct, verify, count, certify and fit each requested family.

    The default schedule is the five powers of two ending at ``max_n``.
    Component errors are recorded in the bundle rather than raised.
    """
    bundle = VerificationBundle(max_n, seed)
    if min_n is None:
        min_n = max(1, max_n // 16)
    schedule = geometric_schedule(min_n, max_n)
    for name in families:
        if name not in SUITE_FAMILIES:
            raise ValueError(f"unknown family {name!r}; choose from {', '.join(SUITE_FAMILIES)}")
        res = FamilyResult(name)
        rng = random.Random(f"{seed}:{name}")
        try:
            if name == "main-f":
                pts = _suite_main_f(res, schedule, rng, workers, backend)
            elif name == "degenerate-sum":
                pts = _suite_degenerate_sum(res, schedule, rng, workers, backend)
            elif name == "valtr-symmetric":
                pts = _suite_valtr_symmetric(res, schedule, rng, workers, backend)
            elif name == "valtr-asymmetric":
                pts = _suite_valtr_asymmetric(res, max_n, rng, workers, backend)
            elif name == "graph-g":
                pts = _suite_graph_g(res, schedule, rng, workers, backend)
            else:
                pts = _suite_mvar_t(res, max_n, rng, workers, backend)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                if len([p for p in pts if p[1] > 0]) >= 2:
                    res.fit = fit_exponent(pts)
        except Exception as exc:  # collected, not aborted
            res.errors.append(f"{type(exc).__name__}: {exc}")
        bundle.families.append(res)
    return bundle



FIT_FAMILIES = ("main-f", "degenerate-sum", "valtr-symmetric", "graph-g")


def count_series(family: str, ns, workers: int = 1, backend: str | None = None) -> list:
    """``[(n, count)]`` for a fit family over the given n values."""
    out = []
    for n in ns:
        if family == "main-f":
            c = count_difference_structure("MainF", n, workers=workers, backend=backend).count
        elif family == "valtr-symmetric":
            c = count_difference_structure("ValtrSymmetric", n, workers=workers, backend=backend).count
        elif family == "degenerate-sum":
            grid = GridSpec([Axis.interval(1, n), Axis.interval(1, n), Axis.interval(-n, -1)])
            c = count_solved(parse_poly("x + y + z", ["x", "y", "z"]), grid, "z",
                             workers=workers, backend=backend).count
        elif family == "graph-g":
            c = C.main_t_size(n)
        else:
            raise ValueError(f"unknown fit family {family!r}; choose from {', '.join(FIT_FAMILIES)}")
        out.append((n, c))
    return out
