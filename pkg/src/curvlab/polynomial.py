"""Multivariate polynomials with exact rational coefficients.

Used for metric components.  Besides ring operations and partial
derivatives, a polynomial can be re-expanded around a point (``taylor``),
truncated, and inverted as a truncated power series, which is all the
metric jets need.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from itertools import product
from math import comb

from gmpy2 import mpq

from .pseudolin import scalar_str, to_exact


class PolyParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {e: mpq(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: to_exact(c)})

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): mpq(1)})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Poly):
            if c.degree() > 0:
                raise ValueError("division by a non-constant polynomial")
            c = c.coefficient((0,) * self.nvars)
        c = to_exact(c)
        return Poly(self.nvars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other, self.nvars)
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exponent) -> mpq:
        return self.terms.get(tuple(exponent), mpq(0))

    def diff(self, i: int, times: int = 1) -> "Poly":
        out = self
        for _ in range(times):
            terms = {}
            for e, c in out.terms.items():
                if e[i]:
                    ne = list(e)
                    ne[i] -= 1
                    terms[tuple(ne)] = c * e[i]
            out = Poly(self.nvars, terms)
        return out

    def __call__(self, point) -> mpq:
        pt = [to_exact(v) for v in point]
        total = mpq(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def truncate(self, order: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= order})

    def taylor(self, point, order: int | None = None) -> "Poly":
        """Re-expand around ``point``: the result ``T`` satisfies ``T(h) = self(point + h)``."""
        pt = [to_exact(v) for v in point]
        out: dict = {}
        for e, c in self.terms.items():
            # prod_i (P_i + h_i)^{e_i}
            ranges = [range(k + 1) for k in e]
            for js in product(*ranges):
                if order is not None and sum(js) > order:
                    continue
                coef = c
                for x, k, j in zip(pt, e, js):
                    coef *= comb(k, j) * x ** (k - j)
                if coef:
                    out[js] = out.get(js, 0) + coef
        return Poly(self.nvars, out)

    def series_inverse(self, order: int) -> "Poly":
        """``1/self`` as a power series around 0, truncated at ``order``."""
        c0 = self.coefficient((0,) * self.nvars)
        if c0 == 0:
            raise ZeroDivisionError("series inverse needs a nonzero constant term")
        rest = (self - c0).truncate(order) / c0
        out = Poly.const(1, self.nvars)
        power = Poly.const(1, self.nvars)
        for _ in range(order):
            power = (power * rest).truncate(order)
            out = out - power if _ % 2 == 0 else out + power
        return out / c0

    def __repr__(self):
        return f"Poly({self.to_str()})"

    def to_str(self, names=None) -> str:
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-k for k in e])):
            c = self.terms[e]
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
            )
            cs = scalar_str(c)
            if mono:
                parts.append(mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"{cs}*{mono}"))
            else:
                parts.append(cs)
        return " + ".join(parts).replace("+ -", "- ")


# ------------------------------------------------------------------ parsing


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_poly(text: str, names: list[str]) -> Poly:
    """Parse ``"x1^2 + 2*x2^2 - x1*x2/3"`` over the given variable names."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"syntax error in {text!r}", exc.lineno or 1, (exc.offset or 1) - 1) from None
    index = {n: i for i, n in enumerate(names)}
    n = len(names)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            value = node.value
            return Poly.const(mpq(Fraction(str(value))) if isinstance(value, float) else value, n)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise PolyParseError(f"unknown variable {node.id!r}", node.lineno, node.col_offset)
            return Poly.var(index[node.id], n)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.degree() > 0:
                    raise PolyParseError("division by a non-constant", node.lineno, node.col_offset)
                if right.is_zero():
                    raise PolyParseError("division by zero", node.lineno, node.col_offset)
                return left / right
            if right.degree() > 0 or right.coefficient((0,) * n).denominator != 1:
                raise PolyParseError("exponent must be a non-negative integer", node.lineno, node.col_offset)
            k = int(right.coefficient((0,) * n))
            if k < 0:
                raise PolyParseError("exponent must be a non-negative integer", node.lineno, node.col_offset)
            return left**k
        raise PolyParseError(
            f"unsupported expression {type(node).__name__}",
            getattr(node, "lineno", 1),
            getattr(node, "col_offset", 0),
        )

    return ev(tree)


def parse_poly_matrix(text: str, names: list[str]) -> list[list[Poly]]:
    """Parse ``"[[x1*x1, x1*x2],[x1*x2, x2*x2]]"``."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"syntax error in {text!r}", exc.lineno or 1, (exc.offset or 1) - 1) from None
    body = tree.body
    if not isinstance(body, ast.List) or not all(isinstance(r, ast.List) for r in body.elts):
        raise PolyParseError("expected a nested list [[...],[...]]", 1, 0)
    return [[parse_poly(ast.unparse(e), names) for e in row.elts] for row in body.elts]
