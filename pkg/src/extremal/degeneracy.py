"""Derivative test for local additivity and exact degree-2 decompositions.

For a bivariate ``f`` the test expression is the mixed partial of
``log|f_x / f_y|``; it vanishes identically whenever ``f`` is locally of the
form ``psi(phi1(x) + phi2(y))``.  A nonzero value therefore certifies that no
such form exists; a zero value is only consistent with one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .polyring import Polynomial, RationalFunction, eval_poly

NONZERO = "NonzeroCertified"
ZERO = "IdenticallyZero"

VERDICT_LABELS = {
    NONZERO: "not locally additive (certified)",
    ZERO: "consistent with degenerate",
}


class PreconditionError(ValueError):
    """The input violates an operation's mathematical precondition."""


class UnsupportedDegree(ValueError):
    """Decomposition requested for a polynomial of total degree above 2."""


@dataclass(frozen=True)
class DerivativeTestResult:
    verdict: str
    numerator: Polynomial
    denominator: Polynomial
    vanishing_samples: tuple = ()
    vanishing_line: Optional[str] = None

    @property
    def label(self) -> str:
        return VERDICT_LABELS[self.verdict]

    @property
    def expression(self) -> RationalFunction:
        return RationalFunction(self.numerator, self.denominator)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "label": self.label,
            "numerator": str(self.numerator),
            "denominator": str(self.denominator),
            "vanishing_samples": [[str(a), str(b)] for a, b in self.vanishing_samples],
            "vanishing_line": self.vanishing_line,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _xy(f: Polynomial):
    if len(f.variables) != 2:
        raise PreconditionError(f"expected a bivariate polynomial, got universe {f.variables}")
    return f.variables


def derivative_test(f: Polynomial, samples=(0, 1, Fraction(7, 3))) -> DerivativeTestResult:
    """Run the derivative test on bivariate ``f`` (variables in universe order).

    The cleared numerator is
    ``(f_xxy f_x - f_xx f_xy) f_y^2 - (f_xyy f_y - f_xy f_yy) f_x^2`` over
    ``f_x^2 f_y^2``.
    """
    x, y = _xy(f)
    fx, fy = f.diff(x), f.diff(y)
    if fx.is_zero() or fy.is_zero():
        raise PreconditionError("f_x and f_y must both be nonzero polynomials")
    fxx, fxy, fyy = fx.diff(x), fx.diff(y), fy.diff(y)
    fxxy, fxyy = fxx.diff(y), fxy.diff(y)
    num = (fxxy * fx - fxx * fxy) * fy * fy - (fxyy * fy - fxy * fyy) * fx * fx
    den = fx * fx * fy * fy
    if num.is_zero():
        return DerivativeTestResult(ZERO, num, den)
    return DerivativeTestResult(NONZERO, num, den, _vanishing_samples(num, samples), _line(num))


def _vanishing_samples(num: Polynomial, xs) -> tuple:
    """Exact zeros of ``num`` on vertical lines ``x = x0`` where it is linear in y."""
    x, y = num.variables
    out = []
    for x0 in xs:
        restricted = num.subs({x: Fraction(x0)}, variables=(y,))
        if restricted.degree == 1:
            a = restricted.coefficient((1,))
            b = restricted.coefficient((0,))
            out.append((Fraction(x0), Fraction(-b) / a))
    return tuple(out)


def _line(num: Polynomial) -> Optional[str]:
    """Zero locus as ``y - c*x = r`` when ``num`` has total degree 1."""
    if num.degree != 1:
        return None
    x, y = num.variables
    a, b, c = num.coefficient((1, 0)), num.coefficient((0, 1)), num.coefficient((0, 0))
    if b == 0:
        return f"{x} = {_fmt(Fraction(-c) / a)}"
    slope = Fraction(-a) / b
    rhs = Fraction(-c) / b
    lhs = y
    if slope == 1:
        lhs += f" - {x}"
    elif slope == -1:
        lhs += f" + {x}"
    elif slope != 0:
        lhs += f" - {_fmt(slope)}*{x}" if slope > 0 else f" + {_fmt(-slope)}*{x}"
    return f"{lhs} = {_fmt(rhs)}"


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def solve_linear_variable(F: Polynomial, v: str) -> Polynomial:
    """Return ``f`` over the remaining variables with ``F = 0  <=>  v = f``.

    ``F`` must have degree exactly 1 in ``v`` with a nonzero constant
    coefficient.
    """
    if F.degree_in(v) != 1:
        raise PreconditionError(f"F must have degree exactly 1 in {v!r}")
    parts = F.coefficients_in(v)
    lead = parts[1]
    if not lead.is_constant():
        raise PreconditionError(f"coefficient of {v!r} is not constant: {lead}")
    c = lead.constant_value()
    rest = parts.get(0, Polynomial.zero(F.variables))
    others = tuple(u for u in F.variables if u != v)
    return rest.scale(Fraction(-1) / c).with_variables(others)


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Decomposition:
    kind: str  # "Additive" or "Multiplicative"
    g: Polynomial  # in t
    h: Polynomial  # in x
    k: Polynomial  # in y

    def recompose(self, variables) -> Polynomial:
        x, y = variables
        hh = self.h.with_variables((x, y)) if self.h.variables != (x, y) else self.h
        kk = self.k.with_variables((x, y)) if self.k.variables != (x, y) else self.k
        inner = hh + kk if self.kind == "Additive" else hh * kk
        return self.g.subs({"t": inner}, variables=(x, y))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "g": str(self.g), "h": str(self.h), "k": str(self.k)}


def _quadratic_coeffs(f: Polynomial):
    x, y = _xy(f)
    if f.degree > 2:
        raise UnsupportedDegree(f"decomposition is only decided for total degree <= 2, got {f.degree}")
    if not (f.depends_on(x) and f.depends_on(y)):
        raise PreconditionError("f must depend on both variables")
    c = f.coefficient
    return (c((2, 0)), c((1, 1)), c((0, 2)), c((1, 0)), c((0, 1)), c((0, 0)))


def _uni(name, coeffs) -> Polynomial:
    """Univariate polynomial in ``name`` from ascending coefficients."""
    return Polynomial((name,), {(e,): Fraction(c) for e, c in enumerate(coeffs) if c})


def _checked(dec: Decomposition, f: Polynomial) -> Decomposition:
    if dec.recompose(f.variables) != f:
        raise AssertionError(f"recomposition failed for {dec} against {f}")
    return dec


def decompose_additive(f: Polynomial) -> Optional[Decomposition]:
    """Find ``f = g(h(x) + k(y))`` for degree <= 2, or ``None`` when impossible.

    Since ``deg f = deg g * max(deg h, deg k)``, either ``g`` is linear and
    ``f`` has no cross term, or ``g`` is quadratic with ``h``, ``k`` linear
    and the quadratic part is a perfect square.
    """
    A, B, C, D, E, F0 = _quadratic_coeffs(f)
    x, y = f.variables
    if B == 0:
        # g(t) = a*t + F0 with h monic and shift-free
        hx = [0, D, A]
        a = A if A != 0 else D
        h = _uni(x, [Fraction(c) / a for c in hx])
        k = _uni(y, [0, Fraction(E) / a, Fraction(C) / a])
        g = _uni("t", [F0, a])
        return _checked(Decomposition("Additive", g, h, k), f)
    if A == 0 or C == 0 or B * B != 4 * A * C:
        return None
    # f = A (x + lam*y)^2 + D (x + lam*y) + F0 needs E = D * lam
    lam = Fraction(B, 2) / A
    if E != D * lam:
        return None
    g = _uni("t", [F0, D, A])
    return _checked(Decomposition("Additive", g, _uni(x, [0, 1]), _uni(y, [0, lam])), f)


def decompose_multiplicative(f: Polynomial) -> Optional[Decomposition]:
    """Find ``f = g(h(x) * k(y))`` for degree <= 2, or ``None`` when impossible.

    Dependence on both variables forces ``deg h, deg k >= 1`` hence
    ``deg g = 1`` and ``f = B (x + E/B)(y + D/B) + const``.
    """
    A, B, C, D, E, F0 = _quadratic_coeffs(f)
    x, y = f.variables
    if A != 0 or C != 0 or B == 0:
        return None
    B = Fraction(B)
    h = _uni(x, [E / B, 1])
    k = _uni(y, [D / B, 1])
    g = _uni("t", [F0 - D * E / B, B])
    return _checked(Decomposition("Multiplicative", g, h, k), f)
