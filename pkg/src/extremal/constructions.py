"""Explicit extremal configurations and their verification.

All generators return tuples as an ``(N, arity)`` int64 array in canonical
order (outer parameters major, ``l`` minor).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .grid import Axis, GridSpec
from .polyring import Polynomial, parse_poly
from .vectorized import eval_rows

MAIN_F = "(x-y)^2 + x - z"
GRAPH_F = "(x-y)^2 + x"
VALTR_V = "(x-y)^2 + s - t"

FAMILIES = ("main-t", "graph-g", "valtr-asymmetric", "valtr-symmetric", "mvar-t")


def main_polynomial() -> Polynomial:
    return parse_poly(MAIN_F, ["x", "y", "z"])


def graph_polynomial() -> Polynomial:
    return parse_poly(GRAPH_F, ["x", "y"])


def valtr_polynomial() -> Polynomial:
    return parse_poly(VALTR_V, ["x", "y", "s", "t"])


def mvar_variables(m: int) -> list:
    return [f"x{i}" for i in range(1, m + 1)]


def mvar_polynomial(m: int) -> Polynomial:
    """(x1 + ... + x_{m-1})^2 + x1 - x_m."""
    if m < 3:
        raise ValueError(f"m must be at least 3, got {m}")
    names = mvar_variables(m)
    s = " + ".join(names[:-1])
    return parse_poly(f"({s})^2 + {names[0]} - {names[-1]}", names)


@dataclass(frozen=True)
class Construction:
    """A generated configuration.

    ``tuples`` is ``None`` for configurations whose object is a count rather
    than an explicit set (the asymmetric Valtr grid).  ``zero_set`` says
    whether every tuple must lie on ``polynomial = 0``; edge sets only have
    to lie in the grid.
    """

    name: str
    params: dict
    tuples: np.ndarray | None
    polynomial: Polynomial
    grid: GridSpec
    zero_set: bool = True
    coordinates: tuple = field(default=())

    @property
    def size(self) -> int:
        return 0 if self.tuples is None else int(self.tuples.shape[0])

    def metadata(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "size": self.size if self.tuples is not None else None,
            "polynomial": str(self.polynomial),
            "grid": str(self.grid),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.coordinates or self.polynomial.variables)
        if self.tuples is not None:
            w.writerows(self.tuples.tolist())
        return buf.getvalue()

    def sidecar_json(self) -> str:
        return json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n"


def _k_l(k_lo, k_hi, l_lo, l_hi):
    k = np.arange(k_lo, k_hi + 1, dtype=np.int64)
    l = np.arange(l_lo, l_hi + 1, dtype=np.int64)
    kk, ll = np.meshgrid(k, l, indexing="ij")
    return kk.ravel(), ll.ravel()


def main_t_size(n: int) -> int:
    return (n // 2) * (isqrt(n) // 2 + 1)


def gen_main_T(n: int) -> Construction:
    """Triples (k, k+l, k+l^2) with 1 <= k <= n//2 and 0 <= l <= isqrt(n)//2.

    >>> gen_main_T(4).tuples.tolist()
    [[1, 1, 1], [1, 2, 2], [2, 2, 2], [2, 3, 3]]
    """
    if n < 1:
        raise ValueError("n must be positive")
    k, l = _k_l(1, n // 2, 0, isqrt(n) // 2)
    tuples = np.stack([k, k + l, k + l * l], axis=1)
    return Construction("MainT", {"n": n}, tuples, main_polynomial(), GridSpec.cube(1, n, 3),
                        coordinates=("x", "y", "z"))


def gen_graph_G(n: int) -> Construction:
    """Edges (k, k+l) over the same (k, l) ranges as :func:`gen_main_T`."""
    if n < 1:
        raise ValueError("n must be positive")
    k, l = _k_l(1, n // 2, 0, isqrt(n) // 2)
    tuples = np.stack([k, k + l], axis=1)
    return Construction("GraphG", {"n": n}, tuples, graph_polynomial(), GridSpec.cube(1, n, 2),
                        zero_set=False, coordinates=("a", "b"))


def valtr_symmetric_size(n: int) -> int:
    return (n // 2) ** 2 * (isqrt(n) // 2)


def gen_valtr(mode: str, n: int | None = None, M: int | None = None):
    """Valtr's configurations for V = (x-y)^2 + s - t.

    ``mode="asymmetric"`` takes ``M`` and returns the grid
    ``[1,M]^2 x [1,M^2]^2`` with no tuples; ``mode="symmetric"`` takes ``n``
    and returns quadruples (k, k+l, m, m+l^2) on ``[1,n]^4`` with
    ``1 <= k, m <= n//2`` and ``1 <= l <= isqrt(n)//2``.
    """
    V = valtr_polynomial()
    mode = mode.lower()
    if mode == "asymmetric":
        if M is None or M < 1:
            raise ValueError("asymmetric mode needs a positive M")
        grid = GridSpec([Axis.interval(1, M)] * 2 + [Axis.interval(1, M * M)] * 2)
        return grid, Construction("ValtrAsymmetric", {"M": M}, None, V, grid, coordinates=V.variables)
    if mode == "symmetric":
        if n is None or n < 1:
            raise ValueError("symmetric mode needs a positive n")
        h, L = n // 2, isqrt(n) // 2
        k = np.arange(1, h + 1, dtype=np.int64)
        l = np.arange(1, L + 1, dtype=np.int64)
        kk, mm, ll = (a.ravel() for a in np.meshgrid(k, k, l, indexing="ij"))
        tuples = np.stack([kk, kk + ll, mm, mm + ll * ll], axis=1)
        grid = GridSpec.cube(1, n, 4)
        return grid, Construction("ValtrSymmetric", {"n": n}, tuples, V, grid, coordinates=V.variables)
    raise ValueError(f"unknown Valtr mode {mode!r}")


def mvar_t_size(m: int, n: int) -> int:
    return (n + 1) ** (m - 2) * (isqrt(n) + 1)


def gen_mvar_T(m: int, n: int):
    """The m-variable set on the grid [-n, 2n]^m.

    Parameters ``0 <= k_1..k_{m-2} <= n`` and ``0 <= l <= isqrt(n)`` give
    ``(k1, k2-k1, ..., k_{m-2}-k_{m-3}, l-k_{m-2}, k1+l^2)``; the first m-1
    coordinates telescope to ``l``.
    """
    if m < 3:
        raise ValueError(f"m must be at least 3, got {m}")
    if n < 1:
        raise ValueError("n must be positive")
    F = mvar_polynomial(m)
    grid = GridSpec.cube(-n, 2 * n, m)
    params = [np.arange(0, n + 1, dtype=np.int64)] * (m - 2) + [np.arange(0, isqrt(n) + 1, dtype=np.int64)]
    mesh = [a.ravel() for a in np.meshgrid(*params, indexing="ij")]
    ks, l = mesh[:-1], mesh[-1]
    cols = [ks[0]] + [ks[i] - ks[i - 1] for i in range(1, m - 2)] + [l - ks[-1], ks[0] + l * l]
    tuples = np.stack(cols, axis=1)
    return grid, Construction("MVarT", {"m": m, "n": n}, tuples, F, grid, coordinates=F.variables)


@dataclass
class VerificationReport:
    name: str
    params: dict
    passed: bool
    size: int
    distinct: bool
    in_grid: bool
    on_zero_set: bool
    failure: dict | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "passed": self.passed,
            "size": self.size,
            "distinct": self.distinct,
            "in_grid": self.in_grid,
            "on_zero_set": self.on_zero_set,
            "failure": self.failure,
        }


def verify_construction(c: Construction, grid: GridSpec | None = None, backend: str | None = None) -> VerificationReport:
    """Check distinctness, grid membership and zero-set membership of every tuple."""
    grid = grid or c.grid
    if c.tuples is None or c.tuples.shape[0] == 0:
        return VerificationReport(c.name, c.params, True, 0, True, True, True)
    t = c.tuples
    failure = None

    uniq, first_idx, counts = np.unique(t, axis=0, return_index=True, return_counts=True)
    distinct = bool(uniq.shape[0] == t.shape[0])
    if not distinct:
        dup = uniq[np.argmax(counts > 1)]
        failure = {"reason": "duplicate", "tuple": dup.tolist()}

    inside = grid.contains_rows(t)
    in_grid = bool(inside.all())
    if not in_grid and failure is None:
        i = int(np.argmin(inside))
        failure = {"reason": "outside grid", "tuple": t[i].tolist(), "index": i}

    on_zero = True
    if c.zero_set:
        vals = eval_rows(c.polynomial, t, backend=backend)
        bad = np.flatnonzero(vals != 0)
        on_zero = bad.size == 0
        if not on_zero and failure is None:
            i = int(bad[0])
            failure = {"reason": "not on zero set", "tuple": t[i].tolist(), "index": i, "value": str(vals[i])}

    return VerificationReport(c.name, c.params, distinct and in_grid and on_zero, int(t.shape[0]),
                              distinct, in_grid, on_zero, failure)


def build(family: str, n: int | None = None, m: int | None = None, M: int | None = None) -> Construction:
    """Dispatch by CLI family name."""
    if family == "main-t":
        return gen_main_T(_need(n, "n"))
    if family == "graph-g":
        return gen_graph_G(_need(n, "n"))
    if family == "valtr-symmetric":
        return gen_valtr("symmetric", n=_need(n, "n"))[1]
    if family == "valtr-asymmetric":
        return gen_valtr("asymmetric", M=_need(M, "M"))[1]
    if family == "mvar-t":
        return gen_mvar_T(_need(m, "m"), _need(n, "n"))[1]
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def _need(v, name):
    if v is None:
        raise ValueError(f"--{name} is required for this family")
    return v
