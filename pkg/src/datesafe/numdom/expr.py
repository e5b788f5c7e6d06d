"""Integer expressions and conditions fed to the numerical domains.

Arithmetic nodes overload ``+ - * // %`` and the order comparisons; ``eq``
and ``ne`` are methods so that node equality stays structural. Boolean nodes
combine with ``& | ~``.

    >>> x, y = Var("x"), Var("y")
    >>> linearize(2 * x - (y + 3))
    ({'x': 2, 'y': -1}, -3)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple, Union

__all__ = [
    "Var",
    "Const",
    "BinOp",
    "Cmp",
    "And",
    "Or",
    "Not",
    "BoolConst",
    "NumExpr",
    "BoolExpr",
    "TRUE",
    "FALSE",
    "lift",
    "linearize",
    "is_one_of",
    "conj",
    "disj",
    "negate",
    "expr_vars",
    "evaluate",
    "holds",
]

Lin = Tuple[Dict[str, int], int]


class _Arith:
    def __add__(self, o):
        return BinOp("+", self, lift(o))

    def __radd__(self, o):
        return BinOp("+", lift(o), self)

    def __sub__(self, o):
        return BinOp("-", self, lift(o))

    def __rsub__(self, o):
        return BinOp("-", lift(o), self)

    def __mul__(self, o):
        return BinOp("*", self, lift(o))

    def __rmul__(self, o):
        return BinOp("*", lift(o), self)

    def __floordiv__(self, o):
        return BinOp("div", self, lift(o))

    def __mod__(self, o):
        return BinOp("mod", self, lift(o))

    def __neg__(self):
        return BinOp("-", Const(0), self)

    def __lt__(self, o):
        return Cmp("<", self, lift(o))

    def __le__(self, o):
        return Cmp("<=", self, lift(o))

    def __gt__(self, o):
        return Cmp(">", self, lift(o))

    def __ge__(self, o):
        return Cmp(">=", self, lift(o))

    def eq(self, o):
        return Cmp("==", self, lift(o))

    def ne(self, o):
        return Cmp("!=", self, lift(o))


class _Logic:
    def __and__(self, o):
        return And(self, o)

    def __or__(self, o):
        return Or(self, o)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Var(_Arith):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Const(_Arith):
    value: int

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class BinOp(_Arith):
    op: str  # + - * div mod
    left: "NumExpr"
    right: "NumExpr"

    def __post_init__(self):
        if self.op in ("div", "mod"):
            if not isinstance(self.right, Const) or self.right.value == 0:
                raise ValueError(f"{self.op} needs a nonzero constant divisor")
            if self.op == "mod" and self.right.value < 0:
                raise ValueError("mod needs a positive modulus")

    def __repr__(self):
        return f"({self.left!r} {self.op} {self.right!r})"


NumExpr = Union[Var, Const, BinOp]

_NEG = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}


@dataclass(frozen=True)
class Cmp(_Logic):
    op: str
    left: NumExpr
    right: NumExpr

    def __repr__(self):
        return f"{self.left!r} {self.op} {self.right!r}"


@dataclass(frozen=True)
class And(_Logic):
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or(_Logic):
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Not(_Logic):
    expr: "BoolExpr"


@dataclass(frozen=True)
class BoolConst(_Logic):
    value: bool


TRUE = BoolConst(True)
FALSE = BoolConst(False)

BoolExpr = Union[Cmp, And, Or, Not, BoolConst]


def lift(x) -> NumExpr:
    if isinstance(x, (Var, Const, BinOp)):
        return x
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"not an integer expression: {x!r}")
    return Const(x)


def conj(items: Iterable[BoolExpr]) -> BoolExpr:
    out: Optional[BoolExpr] = None
    for c in items:
        out = c if out is None else And(out, c)
    return TRUE if out is None else out


def disj(items: Iterable[BoolExpr]) -> BoolExpr:
    out: Optional[BoolExpr] = None
    for c in items:
        out = c if out is None else Or(out, c)
    return FALSE if out is None else out


def is_one_of(e, values: Iterable[int]) -> BoolExpr:
    e = lift(e)
    return disj(e.eq(v) for v in values)


def negate(c: BoolExpr) -> BoolExpr:
    """Negation pushed down to the atoms."""
    if isinstance(c, Cmp):
        return Cmp(_NEG[c.op], c.left, c.right)
    if isinstance(c, And):
        return Or(negate(c.left), negate(c.right))
    if isinstance(c, Or):
        return And(negate(c.left), negate(c.right))
    if isinstance(c, Not):
        return c.expr
    if isinstance(c, BoolConst):
        return BoolConst(not c.value)
    raise TypeError(c)


def linearize(e: NumExpr) -> Optional[Lin]:
    """``(coefficients, constant)`` for affine ``e``; None otherwise."""
    if isinstance(e, Var):
        return {e.name: 1}, 0
    if isinstance(e, Const):
        return {}, e.value
    if e.op in ("+", "-"):
        a = linearize(e.left)
        b = linearize(e.right)
        if a is None or b is None:
            return None
        s = 1 if e.op == "+" else -1
        coefs = dict(a[0])
        for v, k in b[0].items():
            coefs[v] = coefs.get(v, 0) + s * k
        return {v: k for v, k in coefs.items() if k}, a[1] + s * b[1]
    if e.op == "*":
        a = linearize(e.left)
        b = linearize(e.right)
        if a is None or b is None:
            return None
        if not a[0]:
            a, b = b, a
        if b[0]:
            return None
        k = b[1]
        return {v: c * k for v, c in a[0].items() if c * k}, a[1] * k
    return None


def expr_vars(e) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Const, BoolConst)):
        return set()
    if isinstance(e, Not):
        return expr_vars(e.expr)
    return expr_vars(e.left) | expr_vars(e.right)


def evaluate(e: NumExpr, env: Dict[str, int]) -> int:
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return e.value
    a = evaluate(e.left, env)
    b = evaluate(e.right, env)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    if e.op == "div":
        return a // b
    return a % b


_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def holds(c: BoolExpr, env: Dict[str, int]) -> bool:
    if isinstance(c, Cmp):
        return _CMP[c.op](evaluate(c.left, env), evaluate(c.right, env))
    if isinstance(c, And):
        return holds(c.left, env) and holds(c.right, env)
    if isinstance(c, Or):
        return holds(c.left, env) or holds(c.right, env)
    if isinstance(c, Not):
        return not holds(c.expr, env)
    return c.value
