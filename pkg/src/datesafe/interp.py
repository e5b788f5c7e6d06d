"""Concrete interpreters: one rounding mode, or both modes side by side.

The double interpreter runs a program once over pairs of environments
``(env_up, env_down)``. ``random_date()`` draws one date shared by both
components, and ``sync(e)`` is true in both components iff ``e`` has the same
value under Up and Down.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from . import core
from .core import BOTTOM, Bottom, Date, DateValue, RoundingMode, nb_days
from .lang import (
    AccessorCmp,
    AddPeriod,
    And,
    Assert,
    Assume,
    BoolExpr,
    Cmp,
    DateDecl,
    DateExpr,
    FirstDayOf,
    LastDayOf,
    Literal,
    Not,
    Or,
    Program,
    RandomDate,
    Sync,
    Var,
)

__all__ = [
    "RuntimeAmbiguityError",
    "DEFAULT_YEAR_RANGE",
    "DateSampler",
    "eval_expr",
    "eval_bool",
    "run",
    "run_double",
    "RunResult",
    "DoubleRunResult",
    "AssertOutcome",
]

DEFAULT_YEAR_RANGE = (1900, 2100)

Env = Dict[str, DateValue]


class RuntimeAmbiguityError(Exception):
    """A date computation needed rounding while rounding was not allowed."""


_OPS = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    ">": lambda c: c > 0,
    ">=": lambda c: c >= 0,
    "==": lambda c: c == 0,
    "!=": lambda c: c != 0,
}


def compare_op(op: str, a: int, b: int) -> bool:
    return _OPS[op]((a > b) - (a < b))


class DateSampler:
    """Uniform sampling of valid dates over a year range.

    ``bounds`` optionally narrows the box per variable, mapping a variable to
    ``{"year": (lo, hi), "month": (lo, hi), "day": (lo, hi)}``. Uniformity is
    over valid dates in the box: draw a raw triple, reject invalid ones.
    """

    def __init__(self, rng: random.Random, year_range=DEFAULT_YEAR_RANGE, bounds=None):
        self.rng = rng
        self.year_range = year_range
        self.bounds = bounds or {}

    def draw(self, var: Optional[str] = None) -> Date:
        box = self.bounds.get(var, {}) if var is not None else {}
        ylo, yhi = _meet(self.year_range, box.get("year"))
        mlo, mhi = _meet((1, 12), box.get("month"))
        dlo, dhi = _meet((1, 31), box.get("day"))
        if ylo <= yhi and mlo <= mhi and dlo <= dhi:
            for _ in range(2000):
                t = Date(self.rng.randint(ylo, yhi), self.rng.randint(mlo, mhi), self.rng.randint(dlo, dhi))
                if core.valid(t):
                    return t
        # empty or near-empty box: fall back to the unconstrained draw
        if box:
            return DateSampler(self.rng, self.year_range).draw()
        raise ValueError("no valid date in the sampling range")


def _meet(a, b):
    if b is None:
        return a
    return max(a[0], b[0]), min(a[1], b[1])


def _accessor_bounds(program: Program) -> Dict[str, Dict[str, Tuple[int, int]]]:
    """Top-level conjunctive ``assume(accessor_of(v) op k)`` facts per variable."""
    out: Dict[str, Dict[str, Tuple[int, int]]] = {}

    def visit(cond: BoolExpr) -> None:
        if isinstance(cond, And):
            visit(cond.left)
            visit(cond.right)
        elif isinstance(cond, AccessorCmp) and isinstance(cond.expr, Var) and cond.op != "!=":
            lo, hi = -(10**9), 10**9
            k = cond.value
            lo, hi = {
                "<": (lo, k - 1),
                "<=": (lo, k),
                ">": (k + 1, hi),
                ">=": (k, hi),
                "==": (k, k),
            }[cond.op]
            box = out.setdefault(cond.expr.name, {})
            box[cond.accessor] = _meet(box.get(cond.accessor, (-(10**9), 10**9)), (lo, hi))

    for stmt in program:
        if isinstance(stmt, Assume):
            visit(stmt.cond)
    return out


def _eval(r: RoundingMode, e: DateExpr, env: Mapping[str, DateValue], draw) -> DateValue:
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Literal):
        return e.value
    if isinstance(e, RandomDate):
        return draw()
    if isinstance(e, AddPeriod):
        v = core.add_period(r, _eval(r, e.expr, env, draw), e.period)
        if isinstance(v, Bottom):
            raise RuntimeAmbiguityError(f"ambiguous date computation at {e.loc.line}:{e.loc.col}")
        return v
    if isinstance(e, FirstDayOf):
        v = _eval(r, e.expr, env, draw)
        return v if isinstance(v, Bottom) else Date(v.year, v.month, 1)
    if isinstance(e, LastDayOf):
        v = _eval(r, e.expr, env, draw)
        return v if isinstance(v, Bottom) else Date(v.year, v.month, nb_days(v.year, v.month))
    raise TypeError(e)


def eval_expr(r: RoundingMode, e: DateExpr, env: Mapping[str, DateValue], rng: random.Random, year_range=DEFAULT_YEAR_RANGE) -> DateValue:
    sampler = DateSampler(rng, year_range)
    return _eval(r, e, env, sampler.draw)


def _cmp_values(op: str, a: DateValue, b: DateValue) -> bool:
    if isinstance(a, Bottom) or isinstance(b, Bottom):
        raise RuntimeAmbiguityError("comparison on an undefined date")
    return compare_op(op, int(core.compare(a, b)), 0)


def eval_bool(r: RoundingMode, e: BoolExpr, env: Mapping[str, DateValue], draw) -> bool:
    """Single-mode boolean evaluation. ``sync`` is transparent here."""
    if isinstance(e, Cmp):
        return _cmp_values(e.op, _eval(r, e.left, env, draw), _eval(r, e.right, env, draw))
    if isinstance(e, AccessorCmp):
        v = _eval(r, e.expr, env, draw)
        if isinstance(v, Bottom):
            raise RuntimeAmbiguityError("accessor on an undefined date")
        return compare_op(e.op, getattr(v, e.accessor), e.value)
    if isinstance(e, Sync):
        return eval_bool(r, e.expr, env, draw)
    if isinstance(e, Not):
        return not eval_bool(r, e.expr, env, draw)
    if isinstance(e, And):
        return eval_bool(r, e.left, env, draw) and eval_bool(r, e.right, env, draw)
    if isinstance(e, Or):
        return eval_bool(r, e.left, env, draw) or eval_bool(r, e.right, env, draw)
    raise TypeError(e)


@dataclass(frozen=True)
class AssertOutcome:
    index: int
    line: int
    passed: bool


@dataclass
class RunResult:
    mode: RoundingMode
    env: Env
    asserts: List[AssertOutcome] = field(default_factory=list)
    feasible: bool = True
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(a.passed for a in self.asserts)


def run(program: Program, mode: RoundingMode, seed: int, year_range=DEFAULT_YEAR_RANGE, guided: bool = True) -> RunResult:
    """Execute ``program`` under one rounding mode.

    A failing ``assume`` stops the run with ``feasible=False``; a runtime
    ambiguity (only possible under Abort) stops it with ``error`` set.
    """
    rng = random.Random(seed)
    bounds = _accessor_bounds(program) if guided else {}
    sampler = DateSampler(rng, year_range, bounds)
    env: Env = {}
    result = RunResult(mode, env)
    for i, stmt in enumerate(program):
        try:
            if isinstance(stmt, DateDecl):
                env[stmt.name] = _eval(mode, stmt.expr, env, lambda name=stmt.name: sampler.draw(name))
            elif isinstance(stmt, Assume):
                if not eval_bool(mode, stmt.cond, env, sampler.draw):
                    result.feasible = False
                    return result
            else:
                result.asserts.append(AssertOutcome(i, stmt.loc.line, eval_bool(mode, stmt.cond, env, sampler.draw)))
        except RuntimeAmbiguityError as exc:
            result.error = str(exc)
            return result
    return result


# --- double semantics -----------------------------------------------------


@dataclass
class DoubleRunResult:
    env_up: Env
    env_down: Env
    asserts: List[AssertOutcome] = field(default_factory=list)
    feasible: bool = True

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.asserts)


class _SharedDraw:
    """Random draws shared between the Up and Down evaluations of one expression."""

    def __init__(self, sampler: DateSampler, var: Optional[str] = None):
        self.sampler = sampler
        self.var = var
        self.values: List[Date] = []
        self.k = 0

    def reset(self) -> None:
        self.k = 0

    def __call__(self) -> Date:
        if self.k == len(self.values):
            self.values.append(self.sampler.draw(self.var))
        v = self.values[self.k]
        self.k += 1
        return v


def _eval_pair(e: DateExpr, env_u: Env, env_d: Env, draw: _SharedDraw) -> Tuple[DateValue, DateValue]:
    draw.reset()
    vu = _eval(RoundingMode.UP, e, env_u, draw)
    draw.reset()
    vd = _eval(RoundingMode.DOWN, e, env_d, draw)
    return vu, vd


def _atoms(r: RoundingMode, e: BoolExpr, env: Env, draw, out: list) -> None:
    # every atom is evaluated, left to right, so both modes consume draws in the same order
    if isinstance(e, (Sync, Not)):
        _atoms(r, e.expr, env, draw, out)
    elif isinstance(e, (And, Or)):
        _atoms(r, e.left, env, draw, out)
        _atoms(r, e.right, env, draw, out)
    else:
        out.append(eval_bool(r, e, env, draw))


def _combine(e: BoolExpr, it_u, it_d) -> Tuple[bool, bool]:
    if isinstance(e, Sync):
        bu, bd = _combine(e.expr, it_u, it_d)
        return bu == bd, bu == bd
    if isinstance(e, Not):
        bu, bd = _combine(e.expr, it_u, it_d)
        return not bu, not bd
    if isinstance(e, (And, Or)):
        lu, ld = _combine(e.left, it_u, it_d)
        ru, rd = _combine(e.right, it_u, it_d)
        if isinstance(e, And):
            return lu and ru, ld and rd
        return lu or ru, ld or rd
    return next(it_u), next(it_d)


def eval_bool_pair(e: BoolExpr, env_u: Env, env_d: Env, draw: _SharedDraw) -> Tuple[bool, bool]:
    """``(b_up, b_down)`` for ``e``; ``sync(x)`` yields ``(b_u == b_d, b_u == b_d)``."""
    atoms_u: list = []
    atoms_d: list = []
    draw.reset()
    _atoms(RoundingMode.UP, e, env_u, draw, atoms_u)
    draw.reset()
    _atoms(RoundingMode.DOWN, e, env_d, draw, atoms_d)
    return _combine(e, iter(atoms_u), iter(atoms_d))


def run_double(program: Program, seed: int, year_range=DEFAULT_YEAR_RANGE, guided: bool = True) -> DoubleRunResult:
    """Execute ``program`` once under the paired Up/Down semantics.

    ``assume`` must hold in both components, otherwise the run is marked
    infeasible and stops. ``assert`` records whether it holds in both.
    """
    rng = random.Random(seed)
    bounds = _accessor_bounds(program) if guided else {}
    sampler = DateSampler(rng, year_range, bounds)
    env_u: Env = {}
    env_d: Env = {}
    result = DoubleRunResult(env_u, env_d)
    for i, stmt in enumerate(program):
        if isinstance(stmt, DateDecl):
            draw = _SharedDraw(sampler, stmt.name)
            vu, vd = _eval_pair(stmt.expr, env_u, env_d, draw)
            env_u[stmt.name] = vu
            env_d[stmt.name] = vd
        else:
            draw = _SharedDraw(sampler)
            bu, bd = eval_bool_pair(stmt.cond, env_u, env_d, draw)
            if isinstance(stmt, Assume):
                if not (bu and bd):
                    result.feasible = False
                    return result
            else:
                result.asserts.append(AssertOutcome(i, stmt.loc.line, bu and bd))
    return result
