"""Small exact polynomials and a restricted expression language for weight constraints.

Constraint strings use Python syntax over rationals, e.g. ``"v*w+4*v+2 != 2*w"``,
``"v >= w"``, ``"(t,u,v,w) != (1,1,2,2)"``. Only arithmetic, comparisons, tuples and
``and``/``or``/``not`` are accepted.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

Monomial = tuple  # sorted tuple of (variable, exponent)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


class Poly:
    """Polynomial with rational coefficients; immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        t = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                t[tuple(sorted(m))] = t.get(tuple(sorted(m)), 0) + c
        self.terms = {m: c for m, c in t.items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    def _coerce(self, o) -> "Poly":
        return o if isinstance(o, Poly) else Poly.const(o)

    def __add__(self, o):
        o = self._coerce(o)
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        if o.variables or o.is_zero():
            raise ZeroDivisionError("division by a non-constant or zero polynomial")
        c = o.terms[()]
        return Poly({m: x / c for m, x in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = Poly.const(o)
        return isinstance(o, Poly) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, var: str) -> int:
        return max((dict(m).get(var, 0) for m in self.terms), default=0)

    def evaluate(self, env: Mapping) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            x = c
            for v, e in m:
                x *= Fraction(env[v]) ** e
            total += x
        return total

    def substitute_ratio(self, var: str, num: str, den: str) -> "Poly":
        """Replace var by num/den and clear the denominator den**deg_var."""
        d = self.degree_in(var)
        out = Poly()
        for m, c in self.terms.items():
            k = dict(m).get(var, 0)
            rest = tuple((v, e) for v, e in m if v != var)
            out = out + Poly({rest: c}) * Poly.var(num) ** k * Poly.var(den) ** (d - k)
        return out

    def content(self) -> Fraction:
        """Positive rational g such that self/g has coprime integer coefficients."""
        if not self.terms:
            return Fraction(1)
        cs = list(self.terms.values())
        den = math.lcm(*(c.denominator for c in cs))
        nums = [int(c * den) for c in cs]
        return Fraction(math.gcd(*nums), den)

    def normalized(self) -> tuple["Poly", Fraction]:
        """(p, s) with self == s * p, p primitive integral, leading monomial positive."""
        if not self.terms:
            return self, Fraction(1)
        g = self.content()
        lead = min(self.terms, key=_mono_key)
        if self.terms[lead] < 0:
            g = -g
        return Poly({m: c / g for m, c in self.terms.items()}), g

    def is_proportional(self, other: "Poly") -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized()[0] == other.normalized()[0] or self.normalized()[0] == -other.normalized()[0]

    def divmod(self, d: "Poly") -> tuple["Poly", "Poly"]:
        """Multivariate division in lex order: self == q*d + r, no term of r divisible by LT(d)."""
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        names = sorted(self.variables | d.variables)
        key = lambda m: tuple(dict(m).get(v, 0) for v in names)
        lead = max(d.terms, key=key)
        lc, ld = d.terms[lead], dict(lead)
        q, r, rest = Poly(), Poly(), self
        while not rest.is_zero():
            m = max(rest.terms, key=key)
            c = rest.terms[m]
            dm = dict(m)
            if all(dm.get(v, 0) >= e for v, e in ld.items()):
                t = Poly({tuple((v, dm[v] - ld.get(v, 0)) for v in dm if dm[v] > ld.get(v, 0)): c / lc})
                q = q + t
                rest = rest - t * d
            else:
                r = r + Poly({m: c})
                rest = rest - Poly({m: c})
        return q, r

    def sign_definite(self) -> bool:
        """All coefficients share one sign, so the value is nonzero at positive arguments."""
        return bool(self.terms) and len({c > 0 for c in self.terms.values()}) == 1

    def coefficients(self) -> dict:
        return dict(self.terms)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_key):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}**{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _mono_key(m: Monomial):
    return (-sum(e for _, e in m), m)


class ExpressionError(ValueError):
    pass


_CMP = {
    ast.Eq: lambda a, b: a == b,
    ast.NotEq: lambda a, b: a != b,
    ast.Lt: lambda a, b: a < b,
    ast.LtE: lambda a, b: a <= b,
    ast.Gt: lambda a, b: a > b,
    ast.GtE: lambda a, b: a >= b,
}


def _arith(node, leaf):
    """Fold an arithmetic AST with ``leaf`` handling names and constants."""
    if isinstance(node, ast.BinOp):
        a, b = _arith(node.left, leaf), _arith(node.right, leaf)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow):
            if not isinstance(node.right, ast.Constant) and not isinstance(node.right, ast.UnaryOp):
                raise ExpressionError("exponent must be an integer literal")
            return a ** int(b)
        raise ExpressionError(f"operator {type(node.op).__name__} not allowed")
    if isinstance(node, ast.UnaryOp):
        x = _arith(node.operand, leaf)
        if isinstance(node.op, ast.USub):
            return -x
        if isinstance(node.op, ast.UAdd):
            return x
        raise ExpressionError("unary operator not allowed")
    if isinstance(node, (ast.Name, ast.Constant)):
        return leaf(node)
    if isinstance(node, ast.Tuple):
        return tuple(_arith(e, leaf) for e in node.elts)
    raise ExpressionError(f"syntax {type(node).__name__} not allowed")


def _number(node) -> Fraction:
    if isinstance(node.value, bool) or not isinstance(node.value, int):
        raise ExpressionError("only integer literals are allowed")
    return Fraction(node.value)


@dataclass(frozen=True)
class Constraint:
    """A parsed weight constraint."""

    text: str

    def __post_init__(self):
        try:
            tree = ast.parse(self.text, mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {self.text!r}") from exc
        object.__setattr__(self, "_tree", tree.body)
        self._check()

    @property
    def variables(self) -> set[str]:
        return {n.id for n in ast.walk(self._tree) if isinstance(n, ast.Name)}

    def _check(self):
        ok = (ast.BoolOp, ast.And, ast.Or, ast.UnaryOp, ast.Not, ast.USub, ast.UAdd, ast.Compare,
              ast.BinOp, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.Name, ast.Load,
              ast.Constant, ast.Tuple) + tuple(_CMP)
        for n in ast.walk(self._tree):
            if not isinstance(n, ok):
                raise ExpressionError(f"syntax {type(n).__name__} not allowed in {self.text!r}")
            if isinstance(n, ast.Constant):
                _number(n)
        if not isinstance(self._tree, (ast.Compare, ast.BoolOp)) and not (
            isinstance(self._tree, ast.UnaryOp) and isinstance(self._tree.op, ast.Not)
        ):
            raise ExpressionError(f"{self.text!r} is not a boolean condition")

    def holds(self, env: Mapping) -> bool:
        def leaf(n):
            if isinstance(n, ast.Name):
                if n.id not in env:
                    raise ExpressionError(f"unbound variable {n.id}")
                return Fraction(env[n.id])
            return _number(n)

        def ev(n):
            if isinstance(n, ast.BoolOp):
                vals = (ev(v) for v in n.values)
                return all(vals) if isinstance(n.op, ast.And) else any(vals)
            if isinstance(n, ast.UnaryOp) and isinstance(n.op, ast.Not):
                return not ev(n.operand)
            left = _arith(n.left, leaf)
            for op, right in zip(n.ops, n.comparators):
                r = _arith(right, leaf)
                if isinstance(left, tuple) != isinstance(r, tuple) and type(op) not in (ast.Eq, ast.NotEq):
                    raise ExpressionError("ordering comparison of tuples")
                if not _CMP[type(op)](left, r):
                    return False
                left = r
            return True

        return ev(self._tree)

    def polynomial(self) -> Poly | None:
        """For a single non-vanishing condition ``lhs != rhs``, the polynomial lhs - rhs."""
        n = self._tree
        if not (isinstance(n, ast.Compare) and len(n.ops) == 1 and isinstance(n.ops[0], ast.NotEq)):
            return None

        def leaf(x):
            if isinstance(x, ast.Name):
                return Poly.var(x.id)
            return Poly.const(_number(x))

        try:
            a, b = _arith(n.left, leaf), _arith(n.comparators[0], leaf)
        except (ExpressionError, TypeError, ZeroDivisionError):
            return None
        if isinstance(a, tuple) or isinstance(b, tuple):
            return None
        return a - b

    def __str__(self):
        return self.text
