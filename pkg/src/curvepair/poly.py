"""Integer bivariate polynomials.

Grammar accepted by :func:`parse_polynomial`::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT | 'x' | 'y' | '(' expr ')'

Implicit multiplication (``2x``) is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from . import kernels
from .arith import Dyadic, IBox, Interval

__all__ = [
    "BivariatePolynomial",
    "CurvePair",
    "PolynomialSyntaxError",
    "parse_polynomial",
    "partial_derivative",
    "eval_exact",
    "eval_interval",
    "rescale_to_square",
]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class BivariatePolynomial:
    """Immutable polynomial in x, y stored as ``{(deg_x, deg_y): coeff}``."""

    __slots__ = ("terms", "_dense")

    def __init__(self, terms=None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
            if c:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_dense", None)

    def __setattr__(self, name, value):
        raise AttributeError("BivariatePolynomial is immutable")

    @classmethod
    def constant(cls, c: int) -> "BivariatePolynomial":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "BivariatePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @property
    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=0)

    @property
    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=0)

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def dense(self):
        """``(rows, dx, dy)`` for the kernels; ``rows[i][j]`` is the x^i y^j coefficient."""
        if self._dense is None:
            dx, dy = self.degree_x, self.degree_y
            rows = [[0] * (dy + 1) for _ in range(dx + 1)]
            for (i, j), c in self.terms.items():
                rows[i][j] = c
            object.__setattr__(self, "_dense", (rows, dx, dy))
        return self._dense

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BivariatePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = BivariatePolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = BivariatePolynomial.constant(other)
        return isinstance(other, BivariatePolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"BivariatePolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            mono = []
            if i:
                mono.append("x" if i == 1 else f"x^{i}")
            if j:
                mono.append("y" if j == 1 else f"y^{j}")
            mag = abs(c)
            body = "*".join(([str(mag)] if mag != 1 or not mono else []) + mono)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"{'+' if c > 0 else '-'} {body}")
        return " ".join(parts)

    def __call__(self, x, y) -> Dyadic:
        return eval_exact(self, (x, y))


def _as_poly(value) -> BivariatePolynomial:
    if isinstance(value, BivariatePolynomial):
        return value
    if isinstance(value, int):
        return BivariatePolynomial.constant(value)
    raise TypeError(f"cannot combine polynomial with {type(value).__name__}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = list(self._tokenize(text))
        self.pos = 0

    @staticmethod
    def _tokenize(text):
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j < n and text[j] == ".":
                    raise PolynomialSyntaxError("non-integer coefficient", i)
                yield ("int", int(text[i:j]), i)
                i = j
            elif ch in "xy":
                yield ("var", ch, i)
                i += 1
            elif ch in "+-*^()":
                yield (ch, ch, i)
                i += 1
            elif ch in "./":
                raise PolynomialSyntaxError("non-integer coefficient", i)
            else:
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", i)
        yield ("end", None, n)

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> BivariatePolynomial:
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return result

    def expr(self):
        result = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.factor()
        while self.peek()[0] == "*":
            self.take()
            result = result * self.factor()
        return result

    def factor(self):
        kind = self.peek()[0]
        if kind in "+-":
            self.take()
            inner = self.factor()
            return inner if kind == "+" else -inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer literal", tok[2])
            self.take()
            base = base ** tok[1]
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            nxt = self.peek()
            if nxt[0] in ("var", "("):
                raise PolynomialSyntaxError("implicit multiplication is not allowed", nxt[2])
            return BivariatePolynomial.constant(tok[1])
        if tok[0] == "var":
            self.take()
            return BivariatePolynomial.x() if tok[1] == "x" else BivariatePolynomial.y()
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise PolynomialSyntaxError(f"unexpected {tok[1]!r}" if tok[1] else "unexpected end of input", tok[2])


def parse_polynomial(text: str) -> BivariatePolynomial:
    return _Parser(text).parse()


def partial_derivative(p: BivariatePolynomial, var: str) -> BivariatePolynomial:
    if var not in ("x", "y"):
        raise ValueError(f"unknown variable {var!r}")
    out = {}
    for (i, j), c in p.terms.items():
        if var == "x" and i:
            out[(i - 1, j)] = c * i
        elif var == "y" and j:
            out[(i, j - 1)] = c * j
    return BivariatePolynomial(out)


def eval_exact(p: BivariatePolynomial, point) -> Dyadic:
    px, py = (Dyadic.coerce(v) for v in point)
    k = max(0, -px.exponent, -py.exponent)
    rows, dx, dy = p.dense()
    value = kernels.eval_point(rows, dx, dy, px.scaled(k), py.scaled(k), k)
    return Dyadic(value, -k * (dx + dy))


def eval_scaled_point(p: BivariatePolynomial, X: int, Y: int, k: int) -> int:
    """Exact value at ``(X/2**k, Y/2**k)`` times a positive power of two; only its sign is stable."""
    rows, dx, dy = p.dense()
    return kernels.eval_point(rows, dx, dy, X, Y, k)


def eval_interval(p: BivariatePolynomial, box: IBox) -> Interval:
    xl, xh, yl, yh, k = box.scaled()
    rows, dx, dy = p.dense()
    lo, hi = kernels.eval_box(rows, dx, dy, xl, xh, yl, yh, k)
    return Interval.from_scaled(lo, hi, k * (dx + dy))


def eval_interval_scaled(p: BivariatePolynomial, xl: int, xh: int, yl: int, yh: int, k: int):
    """Enclosure as a scaled pair ``(lo, hi)``; the scale is positive so signs are exact."""
    rows, dx, dy = p.dense()
    return kernels.eval_box(rows, dx, dy, xl, xh, yl, yh, k)


def _substitute(p: BivariatePolynomial, ax: Fraction, bx: Fraction, ay: Fraction, by: Fraction):
    """Rational coefficients of p(ax*x + bx, ay*y + by)."""
    x_sub = {1: ax, 0: bx}
    y_sub = {1: ay, 0: by}

    def powers(sub, n):
        out = [{0: Fraction(1)}]
        for _ in range(n):
            prev = out[-1]
            nxt = {}
            for e, c in prev.items():
                for e2, c2 in sub.items():
                    nxt[e + e2] = nxt.get(e + e2, 0) + c * c2
            out.append(nxt)
        return out

    xp = powers(x_sub, p.degree_x)
    yp = powers(y_sub, p.degree_y)
    acc = {}
    for (i, j), c in p.terms.items():
        for ei, ci in xp[i].items():
            for ej, cj in yp[j].items():
                acc[(ei, ej)] = acc.get((ei, ej), 0) + c * ci * cj
    return acc


def rescale_to_square(p: BivariatePolynomial, rect, square) -> BivariatePolynomial:
    """Integer polynomial q = c * (p ∘ A), A the axis-aligned affine map taking square onto rect.

    ``rect`` and ``square`` are ``(x0, y0, x1, y1)``; c is the least positive
    integer clearing denominators.
    """
    rx0, ry0, rx1, ry1 = (Fraction(v) for v in rect)
    sx0, sy0, sx1, sy1 = (Fraction(v) for v in square)
    if rx1 <= rx0 or ry1 <= ry0:
        raise ValueError("degenerate rectangle")
    if sx1 <= sx0 or sy1 <= sy0:
        raise ValueError("degenerate square")
    if sx1 - sx0 != sy1 - sy0:
        raise ValueError("target is not a square")
    ax = (rx1 - rx0) / (sx1 - sx0)
    ay = (ry1 - ry0) / (sy1 - sy0)
    rational = _substitute(p, ax, rx0 - ax * sx0, ay, ry0 - ay * sy0)
    c = lcm(1, *(v.denominator for v in rational.values()))
    return BivariatePolynomial({k: int(v * c) for k, v in rational.items()})


@dataclass(frozen=True)
class CurvePair:
    f: BivariatePolynomial
    g: BivariatePolynomial
    fx: BivariatePolynomial = field(default=None)
    fy: BivariatePolynomial = field(default=None)
    gx: BivariatePolynomial = field(default=None)
    gy: BivariatePolynomial = field(default=None)

    def __post_init__(self):
        for name, src, var in (("fx", self.f, "x"), ("fy", self.f, "y"), ("gx", self.g, "x"), ("gy", self.g, "y")):
            expected = partial_derivative(src, var)
            given = getattr(self, name)
            if given is None:
                object.__setattr__(self, name, expected)
            elif given != expected:
                raise ValueError(f"{name} is not the partial derivative of its curve")

    @classmethod
    def from_text(cls, f_text: str, g_text: str) -> "CurvePair":
        return cls(parse_polynomial(f_text), parse_polynomial(g_text))

    def gradient(self, which: str):
        return (self.fx, self.fy) if which == "f" else (self.gx, self.gy)
