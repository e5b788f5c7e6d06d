"""Surface language for straight-line date programs (``.dl`` files).

Grammar (``#`` starts a line comment)::

    program := stmt*
    stmt    := "date" IDENT "=" dexpr ";"
             | "assume" "(" bexpr ")" ";"
             | "assert" "(" bexpr ")" ";"
    dexpr   := datom ("+" period)*
    datom   := IDENT | DATE | "random_date" "(" ")"
             | ("first_day_of" | "last_day_of") "(" dexpr ")"
    period  := "[" INT "years" "," INT "months" "," INT "days" "]"
    bexpr   := conj ("||" conj)*
    conj    := unary ("&&" unary)*
    unary   := "!" unary | "sync" "(" bexpr ")" | "(" bexpr ")"
             | dexpr RELOP dexpr
             | ACCESSOR "(" dexpr ")" RELOP INT | INT RELOP ACCESSOR "(" dexpr ")"
    ACCESSOR := "day_of" | "month_of" | "year_of"
    DATE    := YYYY "-" MM "-" DD

The accessor comparisons exist so that ``assume`` can constrain the day, month
or year of a date against a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .core import Date, Period, render as render_date, valid

__all__ = [
    "ParseError",
    "Loc",
    "Var",
    "Literal",
    "RandomDate",
    "AddPeriod",
    "FirstDayOf",
    "LastDayOf",
    "DateExpr",
    "Cmp",
    "AccessorCmp",
    "Sync",
    "And",
    "Or",
    "Not",
    "BoolExpr",
    "DateDecl",
    "Assume",
    "Assert",
    "Stmt",
    "Program",
    "parse",
    "render",
    "render_date_expr",
    "render_bool_expr",
    "RELOPS",
    "contains_sync",
    "free_vars",
]

RELOPS = ("<=", ">=", "==", "!=", "<", ">")


class ParseError(Exception):
    """A diagnostic with a source location.

    ``kind`` is one of ``syntax``, ``invalid-literal``, ``use-before-def``
    and ``redefinition``.
    """

    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.kind = kind
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Loc:
    line: int
    col: int
    end_line: int
    end_col: int


_NOLOC = Loc(0, 0, 0, 0)


def _loc_field():
    return field(default=_NOLOC, compare=False, repr=False)


# --- date expressions -----------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Literal:
    value: Date
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class RandomDate:
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class AddPeriod:
    expr: "DateExpr"
    period: Period
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class FirstDayOf:
    expr: "DateExpr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class LastDayOf:
    expr: "DateExpr"
    loc: Loc = _loc_field()


DateExpr = Union[Var, Literal, RandomDate, AddPeriod, FirstDayOf, LastDayOf]

# --- boolean expressions --------------------------------------------------


@dataclass(frozen=True)
class Cmp:
    left: DateExpr
    op: str
    right: DateExpr
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class AccessorCmp:
    """``<accessor>_of(expr) op value``; accessor is day, month or year."""

    accessor: str
    expr: DateExpr
    op: str
    value: int
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Sync:
    expr: "BoolExpr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Not:
    expr: "BoolExpr"
    loc: Loc = _loc_field()


BoolExpr = Union[Cmp, AccessorCmp, Sync, And, Or, Not]

# --- statements -----------------------------------------------------------


@dataclass(frozen=True)
class DateDecl:
    name: str
    expr: DateExpr
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Assume:
    cond: BoolExpr
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Assert:
    cond: BoolExpr
    loc: Loc = _loc_field()


Stmt = Union[DateDecl, Assume, Assert]


@dataclass(frozen=True)
class Program:
    stmts: tuple
    source: str = field(default="", compare=False, repr=False)

    def __iter__(self) -> Iterator[Stmt]:
        return iter(self.stmts)

    def __len__(self) -> int:
        return len(self.stmts)

    def source_line(self, line: int) -> str:
        lines = self.source.splitlines()
        return lines[line - 1] if 0 < line <= len(lines) else ""


# --- lexer ----------------------------------------------------------------

KEYWORDS = {
    "date",
    "assume",
    "assert",
    "sync",
    "random_date",
    "first_day_of",
    "last_day_of",
    "day_of",
    "month_of",
    "year_of",
    "years",
    "months",
    "days",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<date>\d+-\d+-\d+)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|==|!=|&&|\|\||[<>=;(),\[\]+!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # date, int, ident, kw, op, eof
    text: str
    line: int
    col: int

    @property
    def end_col(self) -> int:
        return self.col + len(self.text)


def tokenize(source: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError("syntax", f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# --- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Optional[Token] = None, kind: str = "syntax"):
        tok = tok or self.tok
        return ParseError(kind, message, tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.advance()

    def loc(self, start: Token) -> Loc:
        prev = self.tokens[self.i - 1]
        return Loc(start.line, start.col, prev.line, prev.end_col)

    # program

    def program(self) -> Program:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.stmt())
        return Program(tuple(stmts), self.source)

    def stmt(self) -> Stmt:
        start = self.tok
        if self.at("date"):
            self.advance()
            if self.tok.kind != "ident":
                raise self.error("expected a variable name")
            name = self.advance().text
            self.expect("=")
            expr = self.dexpr()
            self.expect(";")
            return DateDecl(name, expr, self.loc(start))
        if self.at("assume") or self.at("assert"):
            kw = self.advance().text
            self.expect("(")
            cond = self.bexpr()
            self.expect(")")
            self.expect(";")
            cls = Assume if kw == "assume" else Assert
            return cls(cond, self.loc(start))
        raise self.error(f"expected a statement, found {self.tok.text or 'end of input'!r}")

    # date expressions

    def dexpr(self) -> DateExpr:
        start = self.tok
        expr = self.datom()
        while self.at("+"):
            self.advance()
            period = self.period()
            expr = AddPeriod(expr, period, self.loc(start))
        return expr

    def datom(self) -> DateExpr:
        start = self.tok
        if start.kind == "ident":
            self.advance()
            return Var(start.text, self.loc(start))
        if start.kind == "date":
            self.advance()
            y, m, d = (int(p) for p in start.text.split("-"))
            value = Date(y, m, d)
            if not valid(value):
                raise self.error(f"invalid date literal {start.text}", start, kind="invalid-literal")
            return Literal(value, self.loc(start))
        if self.at("random_date"):
            self.advance()
            self.expect("(")
            self.expect(")")
            return RandomDate(self.loc(start))
        if self.at("first_day_of") or self.at("last_day_of"):
            kw = self.advance().text
            self.expect("(")
            inner = self.dexpr()
            self.expect(")")
            cls = FirstDayOf if kw == "first_day_of" else LastDayOf
            return cls(inner, self.loc(start))
        raise self.error(f"expected a date expression, found {start.text or 'end of input'!r}")

    def signed_int(self) -> int:
        if self.tok.kind != "int":
            raise self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        return int(self.advance().text)

    def period(self) -> Period:
        self.expect("[")
        years = self.signed_int()
        self.expect("years")
        self.expect(",")
        months = self.signed_int()
        self.expect("months")
        self.expect(",")
        days = self.signed_int()
        self.expect("days")
        self.expect("]")
        return Period(years, months, days)

    # boolean expressions

    def bexpr(self) -> BoolExpr:
        start = self.tok
        left = self.conj()
        while self.at("||"):
            self.advance()
            left = Or(left, self.conj(), self.loc(start))
        return left

    def conj(self) -> BoolExpr:
        start = self.tok
        left = self.unary()
        while self.at("&&"):
            self.advance()
            left = And(left, self.unary(), self.loc(start))
        return left

    def relop(self) -> str:
        if self.tok.kind == "op" and self.tok.text in RELOPS:
            return self.advance().text
        raise self.error(f"expected a comparison operator, found {self.tok.text or 'end of input'!r}")

    def unary(self) -> BoolExpr:
        start = self.tok
        if self.at("!"):
            self.advance()
            return Not(self.unary(), self.loc(start))
        if self.at("sync"):
            self.advance()
            self.expect("(")
            inner = self.bexpr()
            self.expect(")")
            return Sync(inner, self.loc(start))
        if self.at("("):
            self.advance()
            inner = self.bexpr()
            self.expect(")")
            return inner
        if self.tok.kind == "kw" and self.tok.text in ("day_of", "month_of", "year_of"):
            accessor, expr = self.accessor()
            op = self.relop()
            value = self.signed_int()
            return AccessorCmp(accessor, expr, op, value, self.loc(start))
        if self.tok.kind == "int":
            value = self.signed_int()
            op = self.relop()
            if not (self.tok.kind == "kw" and self.tok.text in ("day_of", "month_of", "year_of")):
                raise self.error("expected day_of, month_of or year_of")
            accessor, expr = self.accessor()
            return AccessorCmp(accessor, expr, _flip(op), value, self.loc(start))
        left = self.dexpr()
        op = self.relop()
        right = self.dexpr()
        return Cmp(left, op, right, self.loc(start))

    def accessor(self):
        accessor = self.advance().text[: -len("_of")]
        self.expect("(")
        expr = self.dexpr()
        self.expect(")")
        return accessor, expr


def _flip(op: str) -> str:
    return {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "==": "==", "!=": "!="}[op]


# --- static checks --------------------------------------------------------


def _date_exprs(e) -> Iterator[DateExpr]:
    if isinstance(e, (Var, Literal, RandomDate)):
        yield e
    elif isinstance(e, (AddPeriod, FirstDayOf, LastDayOf)):
        yield e
        yield from _date_exprs(e.expr)
    elif isinstance(e, Cmp):
        yield from _date_exprs(e.left)
        yield from _date_exprs(e.right)
    elif isinstance(e, AccessorCmp):
        yield from _date_exprs(e.expr)
    elif isinstance(e, (Sync, Not)):
        yield from _date_exprs(e.expr)
    elif isinstance(e, (And, Or)):
        yield from _date_exprs(e.left)
        yield from _date_exprs(e.right)


def free_vars(e) -> list:
    seen = []
    for sub in _date_exprs(e):
        if isinstance(sub, Var) and sub.name not in seen:
            seen.append(sub.name)
    return seen


def contains_sync(e) -> bool:
    if isinstance(e, Sync):
        return True
    if isinstance(e, Not):
        return contains_sync(e.expr)
    if isinstance(e, (And, Or)):
        return contains_sync(e.left) or contains_sync(e.right)
    return False


def _check_sync(e, inside: bool, allowed: bool) -> None:
    if isinstance(e, Sync):
        if not allowed:
            raise ParseError("syntax", "sync is only allowed inside assert", e.loc.line, e.loc.col)
        if inside:
            raise ParseError("syntax", "sync cannot be nested inside sync", e.loc.line, e.loc.col)
        _check_sync(e.expr, True, allowed)
    elif isinstance(e, Not):
        _check_sync(e.expr, inside, allowed)
    elif isinstance(e, (And, Or)):
        _check_sync(e.left, inside, allowed)
        _check_sync(e.right, inside, allowed)


def check(program: Program) -> Program:
    defined = set()
    for stmt in program:
        body = stmt.expr if isinstance(stmt, DateDecl) else stmt.cond
        for sub in _date_exprs(body):
            if isinstance(sub, Var) and sub.name not in defined:
                raise ParseError("use-before-def", f"variable {sub.name!r} used before definition", sub.loc.line, sub.loc.col)
        if isinstance(stmt, DateDecl):
            if stmt.name in defined:
                raise ParseError("redefinition", f"variable {stmt.name!r} is already defined", stmt.loc.line, stmt.loc.col)
            defined.add(stmt.name)
        else:
            _check_sync(stmt.cond, False, isinstance(stmt, Assert))
    return program


def parse(source: str) -> Program:
    return check(_Parser(source).program())


# --- rendering ------------------------------------------------------------


def render_date_expr(e: DateExpr) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Literal):
        return render_date(e.value)
    if isinstance(e, RandomDate):
        return "random_date()"
    if isinstance(e, AddPeriod):
        p = e.period
        return f"{render_date_expr(e.expr)} + [{p.years} years, {p.months} months, {p.days} days]"
    if isinstance(e, FirstDayOf):
        return f"first_day_of({render_date_expr(e.expr)})"
    if isinstance(e, LastDayOf):
        return f"last_day_of({render_date_expr(e.expr)})"
    raise TypeError(e)


def _prec(e: BoolExpr) -> int:
    if isinstance(e, Or):
        return 1
    if isinstance(e, And):
        return 2
    return 3


def render_bool_expr(e: BoolExpr) -> str:
    if isinstance(e, Cmp):
        return f"{render_date_expr(e.left)} {e.op} {render_date_expr(e.right)}"
    if isinstance(e, AccessorCmp):
        return f"{e.accessor}_of({render_date_expr(e.expr)}) {e.op} {e.value}"
    if isinstance(e, Sync):
        return f"sync({render_bool_expr(e.expr)})"
    if isinstance(e, Not):
        inner = render_bool_expr(e.expr)
        return f"!{inner}" if _prec(e.expr) == 3 else f"!({inner})"
    if isinstance(e, (And, Or)):
        prec = _prec(e)
        sym = "||" if isinstance(e, Or) else "&&"
        left = render_bool_expr(e.left)
        right = render_bool_expr(e.right)
        if _prec(e.left) < prec:
            left = f"({left})"
        if _prec(e.right) <= prec:
            right = f"({right})"
        return f"{left} {sym} {right}"
    raise TypeError(e)


def render(program: Program) -> str:
    lines = []
    for stmt in program:
        if isinstance(stmt, DateDecl):
            lines.append(f"date {stmt.name} = {render_date_expr(stmt.expr)};")
        elif isinstance(stmt, Assume):
            lines.append(f"assume({render_bool_expr(stmt.cond)});")
        else:
            lines.append(f"assert({render_bool_expr(stmt.cond)});")
    return "\n".join(lines) + ("\n" if lines else "")
