"""Exact sparse multivariate polynomials and unreduced rational functions.

A :class:`Polynomial` lives in a fixed, ordered variable universe.  Terms are
stored as ``{exponent_vector: coefficient}`` where the exponent vector is
aligned with ``variables`` and coefficients are exact rationals (``int`` when
integral, ``Fraction`` otherwise).  Zero coefficients are never stored.

Expression grammar accepted by :func:`parse_poly`::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*        # '/' only by a nonzero constant
    factor := '-' factor | base ('^' uint)?
    base   := uint | var | '(' expr ')'

Unary minus binds looser than ``^`` so ``-x^2`` means ``-(x^2)``.
Implicit multiplication (``2x``) is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence, Union

Rational = Union[int, Fraction]
Monomial = tuple  # exponent vector aligned with Polynomial.variables

__all__ = [
    "Monomial",
    "ParseError",
    "Polynomial",
    "RationalFunction",
    "UniverseMismatch",
    "eval_poly",
    "parse_poly",
    "partial_derivative",
    "poly_arith",
    "rf_is_zero",
]


class UniverseMismatch(ValueError):
    """Raised when two polynomials over different variable lists are combined."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def _norm(c) -> Rational:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _as_rational(value) -> Rational:
    if isinstance(value, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _norm(value)
    if isinstance(value, str):
        return _norm(Fraction(value))
    raise TypeError(f"inexact coefficient {value!r}; use int or Fraction")


class Polynomial:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("_variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Rational] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        clean = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(variables):
                raise ValueError(f"monomial {mono} does not match universe {variables}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            coef = _as_rational(coef)
            if coef != 0:
                clean[mono] = coef
        object.__setattr__(self, "_variables", variables)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): _as_rational(value)})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}; universe is {variables}")
        mono = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {mono: 1})

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        object.__setattr__(p, "_variables", variables)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- accessors ------------------------------------------------------------

    @property
    def variables(self) -> tuple:
        return self._variables

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Rational:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * len(self._variables), 0)

    @property
    def degree(self) -> float:
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self._terms:
            return float("-inf")
        return max(sum(m) for m in self._terms)

    def degree_in(self, name: str) -> float:
        i = self._index(name)
        if not self._terms:
            return float("-inf")
        return max(m[i] for m in self._terms)

    def depends_on(self, name: str) -> bool:
        i = self._index(name)
        return any(m[i] for m in self._terms)

    def coefficient(self, monomial: Mapping[str, int] | tuple) -> Rational:
        if not isinstance(monomial, tuple):
            monomial = tuple(int(monomial.get(v, 0)) for v in self._variables)
        return self._terms.get(monomial, 0)

    def _index(self, name: str) -> int:
        try:
            return self._variables.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}; universe is {self._variables}") from None

    # -- ring operations ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._variables != self._variables:
                raise UniverseMismatch(
                    f"variable universes differ: {self._variables} vs {other._variables}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(self._variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return Polynomial._raw(self._variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self._variables, {m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self._variables, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = _as_rational(c)
        if c == 0:
            return Polynomial.zero(self._variables)
        return Polynomial._raw(self._variables, {m: _norm(v * c) for m, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._variables == other._variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == Polynomial.constant(self._variables, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self._variables, frozenset(self._terms.items())))
            )
        return self._hash

    # -- calculus and substitution --------------------------------------------

    def diff(self, name: str) -> "Polynomial":
        i = self._index(name)
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                nm = m[:i] + (e - 1,) + m[i + 1:]
                out[nm] = c * e
        return Polynomial._raw(self._variables, out)

    def __call__(self, point: Mapping[str, Rational] | Sequence[Rational]) -> Rational:
        return eval_poly(self, point)

    def subs(self, mapping: Mapping[str, "Polynomial | Rational"], variables: Sequence[str] | None = None) -> "Polynomial":
        """Substitute polynomials for variables and land in ``variables``.

        Every variable of ``self`` must be mapped unless it also belongs to the
        target universe, in which case it maps to itself.  Replacement
        polynomials must already live in the target universe.
        """
        target = tuple(variables) if variables is not None else self._variables
        images = []
        for v in self._variables:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, Polynomial):
                    img = Polynomial.constant(target, img)
                elif img._variables != target:
                    raise UniverseMismatch(f"replacement for {v} is over {img._variables}, expected {target}")
            elif v in target:
                img = Polynomial.var(target, v)
            else:
                raise ValueError(f"variable {v!r} has no replacement in universe {target}")
            images.append(img)
        result = Polynomial.zero(target)
        power_cache: dict = {}
        for m, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in power_cache:
                        power_cache[key] = images[i] ** e
                    term = term * power_cache[key]
            result = result + term
        return result

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express in another universe that contains every variable in use."""
        variables = tuple(variables)
        idx = []
        for j, v in enumerate(self._variables):
            used = any(m[j] for m in self._terms)
            if v in variables:
                idx.append(variables.index(v))
            elif used:
                raise UniverseMismatch(f"variable {v!r} is used but absent from {variables}")
            else:
                idx.append(None)
        out = {}
        for m, c in self._terms.items():
            nm = [0] * len(variables)
            for j, e in enumerate(m):
                if e:
                    nm[idx[j]] = e
            out[tuple(nm)] = c
        return Polynomial._raw(variables, out)

    def coefficients_in(self, name: str) -> dict:
        """Split as ``sum_e coeff_e * name^e``; coefficients keep the full universe."""
        i = self._index(name)
        parts: dict = {}
        for m, c in self._terms.items():
            e = m[i]
            parts.setdefault(e, {})[m[:i] + (0,) + m[i + 1:]] = c
        return {e: Polynomial._raw(self._variables, t) for e, t in parts.items()}

    # -- printing -------------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in graded lexicographic order (declared variable order)."""
        return sorted(self._terms.items(), key=lambda mc: (-sum(mc[0]), tuple(-e for e in mc[0])))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            factors = []
            for v, e in zip(self._variables, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if a != 1 or not factors:
                factors.insert(0, str(a))
            body = "*".join(factors)
            if k == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, variables={list(self._variables)})"


class RationalFunction:
    """Quotient of two polynomials over one universe, never gcd-reduced."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Polynomial, denominator: Polynomial | None = None):
        if denominator is None:
            denominator = Polynomial.constant(numerator.variables, 1)
        if numerator.variables != denominator.variables:
            raise UniverseMismatch("numerator and denominator universes differ")
        if denominator.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @property
    def variables(self):
        return self.numerator.variables

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RationalFunction(Polynomial.constant(self.variables, other))
        return NotImplemented

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.numerator.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numerator * other.denominator, self.denominator * other.numerator)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None

    def diff(self, name: str) -> "RationalFunction":
        p, q = self.numerator, self.denominator
        return RationalFunction(p.diff(name) * q - p * q.diff(name), q * q)

    def __call__(self, point) -> Rational:
        den = eval_poly(self.denominator, point)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return _norm(Fraction(eval_poly(self.numerator, point)) / den)

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


# ---------------------------------------------------------------------------
# parser


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple):
        self.text = text
        self.variables = variables
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "name") or tok[1] == "(":
                raise self.error("implicit multiplication is not supported; use '*'")
            raise self.error(f"unexpected {tok[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op_tok = self.take()
            q = self.factor()
            if op_tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise self.error("division is only allowed by a nonzero constant", op_tok)
                p = p.scale(Fraction(1) / q.constant_value())
        return p

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return -self.factor()
        b = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            etok = self.peek()
            if etok[0] == "op" and etok[1] == "-":
                raise self.error("negative exponent", etok)
            if etok[0] != "int":
                raise self.error("exponent must be a non-negative integer literal", etok)
            self.take()
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                raise self.error("chained exponents are not supported", nxt)
            return b ** etok[1]
        return b

    def base(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return Polynomial.constant(self.variables, val)
        if kind == "name":
            if val not in self.variables:
                raise self.error(f"undeclared variable {val!r}", tok)
            return Polynomial.var(self.variables, val)
        if kind == "op" and val == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
            return p
        if kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {val!r}", tok)


def variables_in_order(text: str) -> list:
    """Names appearing in ``text``, in order of first appearance."""
    seen = []
    for kind, val, _ in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen


def parse_poly(text: str, variables: Sequence[str] | None = None) -> Polynomial:
    """Parse and fully expand ``text`` over ``variables``.

    When ``variables`` is omitted the universe is the names of ``text`` in
    order of first appearance.

    >>> str(parse_poly("(x-y)^2 + x - z", ["x", "y", "z"]))
    'x^2 - 2*x*y + y^2 + x - z'
    """
    if variables is None:
        variables = variables_in_order(text)
    return _Parser(text, tuple(variables)).parse()


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Polynomial, v: str) -> Polynomial:
    return p.diff(v)


def eval_poly(p: Polynomial, point: Mapping[str, Rational] | Sequence[Rational]) -> Rational:
    """Exact value of ``p`` at ``point`` (a name map or a sequence in universe order)."""
    if isinstance(point, Mapping):
        values = []
        for i, v in enumerate(p.variables):
            if v in point:
                values.append(_as_rational(point[v]))
            elif any(m[i] for m in p._terms):
                raise ValueError(f"variable {v!r} is not assigned")
            else:
                values.append(0)
    else:
        values = [_as_rational(c) for c in point]
        if len(values) != len(p.variables):
            raise ValueError(f"expected {len(p.variables)} coordinates, got {len(values)}")
    total = 0
    for m, c in p._terms.items():
        t = c
        for val, e in zip(values, m):
            if e:
                t = t * val ** e
        total += t
    return _norm(total) if isinstance(total, Fraction) else total


def rf_is_zero(r: RationalFunction) -> bool:
    return r.numerator.is_zero()


def lcm_denominator(p: Polynomial) -> int:
    """Least common denominator of the coefficients of ``p``."""
    from math import lcm

    d = 1
    for c in p._terms.values():
        if isinstance(c, Fraction):
            d = lcm(d, c.denominator)
    return d


def integer_terms(p: Polynomial, scale: int = 1) -> list:
    """``[(coef, exponents)]`` of ``scale * p``; raises unless all are integers."""
    out = []
    for m, c in p.sorted_terms():
        v = c * scale
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise ValueError("scaled polynomial has non-integer coefficients")
            v = int(v)
        out.append((v, m))
    return out

