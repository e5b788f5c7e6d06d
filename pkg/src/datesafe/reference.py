"""Rule-by-rule small-step interpreter for date additions and rounding.

Deliberately slow: every reduction rule (Add-Year, Add-Month, Add-Month-Over,
Add-Month-Under, the six Add-Days rules, Add-Comp and the Round-* rules) is a
separate branch of :func:`step`. The fast functions in :mod:`datesafe.core`
are tested against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import BOTTOM, Bottom, Date, Period, RoundingMode, nb_days

__all__ = ["Add", "Rnd", "Term", "step", "evaluate", "ref_add_period", "Stuck"]


@dataclass(frozen=True)
class Add:
    expr: "Term"
    unit: str  # "y", "m" or "d"
    n: int


@dataclass(frozen=True)
class Rnd:
    mode: RoundingMode
    expr: "Term"


Term = Union[Date, Bottom, Add, Rnd]


class Stuck(Exception):
    """No rule applies; never raised for well-formed terms."""


def _is_value(t: Term) -> bool:
    return isinstance(t, (Date, Bottom))


def _month_ok(v: Date) -> bool:
    return 1 <= v.month <= 12


def step(t: Term) -> Term:
    if _is_value(t):
        raise Stuck(t)
    if isinstance(t, Rnd):
        inner = t.expr
        if not _is_value(inner):
            return Rnd(t.mode, step(inner))
        return _step_round(t.mode, inner)
    inner = t.expr
    if not _is_value(inner):
        # Add-Comp
        return Add(step(inner), t.unit, t.n)
    if isinstance(inner, Bottom):
        return BOTTOM
    y, m, d = inner.year, inner.month, inner.day
    n = t.n
    if t.unit == "y":
        # Add-Year
        return Date(y + n, m, d)
    if t.unit == "m":
        if m + n < 1:
            # Add-Month-Under
            return Add(Date(y - 1, m, d), "m", n + 12)
        if m + n > 12:
            # Add-Month-Over
            return Add(Date(y + 1, m, d), "m", n - 12)
        # Add-Month
        return Date(y, m + n, d)
    if t.unit != "d":
        raise Stuck(t)
    if not _month_ok(inner):
        return BOTTOM
    last = nb_days(y, m)
    if d < 1:
        # Add-Days-Err1
        return BOTTOM
    if d > last:
        # Add-Days-Err2
        return BOTTOM
    if 1 <= d + n <= last:
        # Add-Days
        return Date(y, m, d + n)
    if d + n > last:
        # Add-Days-Over
        return Add(Add(Date(y, m, 1), "m", 1), "d", n - (last - d) - 1)
    if d > 1:
        # Add-Days-Under1 (d + n <= 0)
        return Add(Date(y, m, 1), "d", d - 1 + n)
    # Add-Days-Under2 (d == 1, n + 1 <= 0)
    prev = evaluate(Add(Date(y, m, 1), "m", -1))
    return Add(Date(prev.year, prev.month, 1), "d", n + nb_days(prev.year, prev.month))


def _step_round(mode: RoundingMode, v: Union[Date, Bottom]) -> Term:
    if isinstance(v, Bottom):
        return BOTTOM
    if v.day < 1:
        # Round-Err1
        return BOTTOM
    if not _month_ok(v):
        return BOTTOM
    last = nb_days(v.year, v.month)
    if v.day <= last:
        # Round-Noop
        return v
    if mode is RoundingMode.DOWN:
        return Date(v.year, v.month, last)
    if mode is RoundingMode.UP:
        nxt = evaluate(Add(v, "m", 1))
        return Date(nxt.year, nxt.month, 1)
    # Round-Err2
    return BOTTOM


def evaluate(t: Term, max_steps: int = 10_000_000) -> Union[Date, Bottom]:
    """Reduce ``t`` to a value with the transitive closure of :func:`step`."""
    for _ in range(max_steps):
        if _is_value(t):
            return t
        t = step(t)
    raise RuntimeError("reduction did not terminate within the step budget")


def ref_add_period(r: RoundingMode, v: Union[Date, Bottom], p: Period) -> Union[Date, Bottom]:
    term = Add(Rnd(r, Add(Add(v, "y", p.years), "m", p.months)), "d", p.days)
    return evaluate(term)
