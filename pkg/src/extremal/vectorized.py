"""Integer compilation of polynomials and overflow-checked vectorized evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .polyring import Polynomial, integer_terms, lcm_denominator

# headroom below 2**63 so a final addition can never wrap
INT64_LIMIT = 1 << 62


@dataclass(frozen=True)
class IntPoly:
    """``denom * p`` as parallel integer coefficient / exponent arrays."""

    coefs: tuple
    exps: np.ndarray
    denom: int

    @classmethod
    def from_poly(cls, p: Polynomial, variables=None) -> "IntPoly":
        if variables is not None:
            p = p.with_variables(variables)
        denom = lcm_denominator(p)
        terms = integer_terms(p, denom)
        exps = np.array([m for _, m in terms], dtype=np.int64).reshape(len(terms), len(p.variables))
        return cls(tuple(c for c, _ in terms), exps, denom)

    def magnitude_bound(self, max_abs) -> int:
        """Upper bound on |value| and on every partial sum/product when
        coordinate ``j`` ranges over values with ``|v| <= max_abs[j]``."""
        total = 0
        for c, e in zip(self.coefs, self.exps):
            t = abs(c)  # integer and nonzero, so every partial product is <= t at the end
            for a, k in zip(max_abs, e):
                t *= int(a) ** int(k)
            total += t
        return total

    def fits_int64(self, max_abs) -> bool:
        return self.magnitude_bound(max_abs) < INT64_LIMIT


def eval_rows(p: Polynomial, rows, backend: str | None = None) -> np.ndarray:
    """Exact values of ``p`` on each row; int64 when safe, object dtype otherwise.

    Rows are ``(N, len(p.variables))`` integer arrays.  Polynomials with
    non-integer coefficients are evaluated on the scaled integer form and
    returned as exact ``Fraction`` objects.
    """
    rows = np.asarray(rows)
    if rows.ndim != 2 or rows.shape[1] != len(p.variables):
        raise ValueError(f"rows must have shape (N, {len(p.variables)})")
    ip = IntPoly.from_poly(p)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if rows.dtype == object:
        max_abs = [max(abs(int(v)) for v in rows[:, j]) for j in range(rows.shape[1])]
    else:
        max_abs = [int(np.abs(rows[:, j]).max()) for j in range(rows.shape[1])]
    if ip.fits_int64(max_abs):
        vals = kernels.get(backend).eval_rows(ip.coefs, ip.exps, rows.astype(np.int64))
    else:
        vals = kernels.numpy_impl.eval_rows(ip.coefs, ip.exps, rows, dtype=object)
    if ip.denom != 1:
        from fractions import Fraction

        vals = np.array([Fraction(int(v), ip.denom) for v in vals], dtype=object)
    return vals
