"""Exact counting of grid points on a zero set and of images along edge sets.

Three counters share one contract (same count for the same polynomial and
grid):

* :func:`count_bruteforce` evaluates the polynomial at every grid point;
* :func:`count_solved` enumerates all but one axis and tests whether the
  forced value of the solved variable lies on its axis;
* :func:`count_difference_structure` uses closed-form per-difference sums
  for the two built-in families that only depend on ``x - y``.

Work is split over contiguous chunks of the outermost axis and reduced by
integer addition, so results do not depend on ``workers``.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import kernels
from .degeneracy import solve_linear_variable
from .grid import Axis, GridSpec
from .polyring import Polynomial, parse_poly
from .vectorized import INT64_LIMIT, IntPoly, eval_rows

DEFAULT_BUDGET = 10**9

BRUTE_FORCE = "BruteForce"
SOLVED = "SolvedVariable"
DIFFERENCE = "DifferenceStructure"

DIFFERENCE_FAMILIES = ("MainF", "ValtrSymmetric")


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    raw = os.environ.get("EXTREMAL_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass
class CountReport:
    polynomial: Polynomial
    grid: GridSpec
    count: int
    method: str
    elapsed: float = 0.0
    family: str | None = None
    n: int | None = None

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "family": self.family,
            "n": self.n,
            "polynomial": str(self.polynomial),
            "grid": str(self.grid),
            "count": self.count,
            "method": self.method,
        }
        if timings:
            d["millis"] = round(self.elapsed * 1000, 3)
        return d

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True)


@dataclass
class ImageReport:
    polynomial: Polynomial
    distinct_values: int
    edge_count: int
    complete: bool = False
    min_value: int | None = None
    max_value: int | None = None
    values: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "polynomial": str(self.polynomial),
            "edges": "Complete" if self.complete else "Explicit",
            "edge_count": self.edge_count,
            "distinct_values": self.distinct_values,
            "min_value": None if self.min_value is None else str(self.min_value),
            "max_value": None if self.max_value is None else str(self.max_value),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _chunks(size: int, workers: int) -> list:
    workers = max(1, int(workers))
    bounds = np.linspace(0, size, workers + 1).astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _reduce(fn, size: int, workers: int) -> int:
    chunks = _chunks(size, workers)
    if len(chunks) <= 1:
        return int(fn(0, size)) if size > 0 else 0
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: int(fn(*c)), chunks))
    return sum(parts)


def _check_arity(F: Polynomial, grid: GridSpec):
    if grid.arity != len(F.variables):
        raise ValueError(f"grid arity {grid.arity} does not match {len(F.variables)} variables {F.variables}")


def count_bruteforce(F: Polynomial, grid: GridSpec, budget: int | None = None,
                     workers: int = 1, backend: str | None = None) -> CountReport:
    """Count zeros of ``F`` on ``grid`` by full enumeration."""
    _check_arity(F, grid)
    budget = default_budget() if budget is None else budget
    if grid.cells > budget:
        raise BudgetExceeded(f"{grid.cells} evaluations exceed the budget of {budget}")
    t0 = time.perf_counter()
    if grid.cells == 0:
        return CountReport(F, grid, 0, BRUTE_FORCE, time.perf_counter() - t0)
    ip = IntPoly.from_poly(F)
    axes = [a.values() for a in grid.axes]
    if ip.fits_int64([a.max_abs for a in grid.axes]):
        impl, dtype = kernels.get(backend), np.int64
    else:
        impl, dtype = kernels.numpy_impl, object
    count = _reduce(lambda lo, hi: impl.count_zeros(ip.coefs, ip.exps, axes, lo, hi, dtype),
                    len(axes[0]), workers)
    return CountReport(F, grid, count, BRUTE_FORCE, time.perf_counter() - t0)


def count_solved(F: Polynomial, grid: GridSpec, solve_var: str, budget: int | None = None,
                 workers: int = 1, backend: str | None = None) -> CountReport:
    """Count zeros of ``F`` on ``grid`` via the solved form ``solve_var = f(others)``."""
    _check_arity(F, grid)
    f = solve_linear_variable(F, solve_var)
    j = F.variables.index(solve_var)
    others = [a for i, a in enumerate(grid.axes) if i != j]
    target: Axis = grid.axes[j]
    budget = default_budget() if budget is None else budget
    work = 1
    for a in others:
        work *= a.size
    if work > budget:
        raise BudgetExceeded(f"{work} evaluations exceed the budget of {budget}")
    t0 = time.perf_counter()
    if grid.cells == 0:
        return CountReport(F, grid, 0, SOLVED, time.perf_counter() - t0)
    ip = IntPoly.from_poly(f)
    if not others:
        v = f.constant_value() if f.is_constant() else None
        count = int(v is not None and getattr(v, "denominator", 1) == 1 and int(v) in target)
        return CountReport(F, grid, count, SOLVED, time.perf_counter() - t0)
    axes = [a.values() for a in others]
    t_vals = target.values()
    if ip.fits_int64([a.max_abs for a in others]) and target.max_abs < INT64_LIMIT:
        impl, dtype = kernels.get(backend), np.int64
    else:
        impl, dtype = kernels.numpy_impl, object
        t_vals = t_vals.astype(object)
    count = _reduce(
        lambda lo, hi: impl.count_solved(ip.coefs, ip.exps, axes, lo, hi, ip.denom, t_vals,
                                         target.is_interval, target.lo, target.hi, dtype),
        len(axes[0]), workers)
    return CountReport(F, grid, count, SOLVED, time.perf_counter() - t0)


def difference_family(family: str, n: int):
    """Polynomial and grid a difference-structure family counts."""
    if family == "MainF":
        return parse_poly("(x-y)^2 + x - z", ["x", "y", "z"]), GridSpec.cube(1, n, 3)
    if family == "ValtrSymmetric":
        return parse_poly("(x-y)^2 + s - t", ["x", "y", "s", "t"]), GridSpec.cube(1, n, 4)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(DIFFERENCE_FAMILIES)}")


def count_difference_structure(family: str, n: int, workers: int = 1, backend: str | None = None) -> CountReport:
    """O(n) exact count for ``MainF`` on [1,n]^3 or ``ValtrSymmetric`` on [1,n]^4.

    MainF: for each x, ``y = x - d`` with ``d^2 <= n - x`` and ``y`` in [1, n].
    ValtrSymmetric: ``(n - |d|)`` pairs with ``x - y = d`` times
    ``max(0, n - d^2)`` pairs with ``t - s = d^2``.
    """
    F, grid = difference_family(family, n)
    if n < 1:
        raise ValueError("n must be positive")
    impl = kernels.get(backend)
    t0 = time.perf_counter()
    if family == "MainF":
        count = _reduce(lambda lo, hi: impl.main_f_count(n, lo + 1, hi + 1), n, workers)
    else:
        r = isqrt(n)
        span = 2 * r + 1
        # the total is below n^2 * (2 sqrt(n) + 1)
        if n * n * span < INT64_LIMIT:
            fn = impl.valtr_count
        else:
            fn = impl.valtr_count_exact
        count = _reduce(lambda lo, hi: fn(n, lo - r, hi - r), span, workers)
    return CountReport(F, grid, count, DIFFERENCE, time.perf_counter() - t0, family=family, n=n)


def image_along_edges(f: Polynomial, A, edges="complete", backend: str | None = None) -> ImageReport:
    """Distinct values of bivariate ``f`` on ``edges`` (an ``(N, 2)`` array) or on all of A x A."""
    if len(f.variables) != 2:
        raise ValueError("image_along_edges needs a bivariate polynomial")
    if not isinstance(A, Axis):
        A = Axis.of(A)
    complete = isinstance(edges, str)
    if complete:
        if edges.lower() != "complete":
            raise ValueError(f"edges must be an array of pairs or 'complete', got {edges!r}")
        v = A.values()
        a, b = np.meshgrid(v, v, indexing="ij")
        pairs = np.stack([a.ravel(), b.ravel()], axis=1)
    else:
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        inside = A.contains_array(pairs[:, 0]) & A.contains_array(pairs[:, 1])
        if not inside.all():
            bad = pairs[int(np.argmin(inside))].tolist()
            raise ValueError(f"edge {bad} has an endpoint outside A")
    if pairs.shape[0] == 0:
        return ImageReport(f, 0, 0, complete)
    vals = eval_rows(f, pairs, backend=backend)
    if vals.dtype == object:
        uniq = sorted(set(vals.tolist()))
        uniq_arr = np.array(uniq, dtype=object)
    else:
        uniq_arr = np.unique(vals)
    return ImageReport(f, int(len(uniq_arr)), int(pairs.shape[0]), complete,
                       uniq_arr[0], uniq_arr[-1], uniq_arr)


def sz_bound_check(report: CountReport, d: int) -> bool:
    """Schwartz-Zippel style sanity bound ``count <= d * n^(m-1)``, ``n`` the largest axis size."""
    m = report.grid.arity
    n = report.grid.side
    return report.count <= d * n ** (m - 1)


def write_csv(reports, path_or_file, timings: bool = False) -> None:
    """CSV with columns family, n, count, method, millis (millis blank unless ``timings``)."""
    import csv

    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["family", "n", "count", "method", "millis"])
        for r in reports:
            millis = f"{r.elapsed * 1000:.3f}" if timings else ""
            w.writerow([r.family or "", "" if r.n is None else r.n, r.count, r.method, millis])
    finally:
        if own:
            fh.close()
