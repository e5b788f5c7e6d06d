"""Dates as triples of integer ghost variables inside a numerical state.

A date variable ``v`` is represented by the ghost variables ``y#v``, ``m#v``
and ``d#v``; when the Up and Down evaluations of ``v`` differ the copies are
tagged ``u.y#v`` / ``d.y#v`` and so on. ``#`` cannot occur in a source
identifier, so ghost names never clash with program names.

Transfer functions return *cases*: a list of ``Case(label, state, value)``
whose union covers the concrete behaviours. Bottom cases are dropped.
Every function re-applies :func:`strengthen_all`, which removes ghost
valuations that are not valid dates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from .core import Date, Period, RoundingMode, is_leap, valid
from .numdom.expr import Var, conj, is_one_of
from .numdom.product import INF, K, ProductState

__all__ = [
    "Handle",
    "Case",
    "Unsupported",
    "ghost",
    "handles_of",
    "gamma_member",
    "mk_random_date",
    "mk_const_date",
    "copy_date",
    "day_of",
    "month_of",
    "year_of",
    "first_day_of",
    "last_day_of",
    "add_months_abs",
    "add_period_abs",
    "dates_cmp",
    "dates_lt",
    "dates_le",
    "dates_eq",
    "accessor_cmp",
    "strengthen",
    "strengthen_all",
    "LABELS",
]

LABELS = {
    "leap": "Rounding to 29 Feb. of a leap year",
    "nonleap": "Rounding to 28 Feb. of a non-leap year",
    "thirty": "Rounding to a 30-day month",
    "none": "No rounding",
}

_THIRTY = (4, 6, 9, 11)
_THIRTY_ONE = (1, 3, 5, 7, 8, 10, 12)


class Unsupported(Exception):
    """A date operation the abstract domain does not handle."""


def ghost(var: str, comp: str, tag: Optional[str] = None) -> str:
    base = f"{comp}#{var}"
    return f"{tag}.{base}" if tag else base


@dataclass(frozen=True)
class Handle:
    """The three ghost variables of one date."""

    var: str
    tag: Optional[str] = None  # None (synced), "u" or "d"

    @property
    def year(self) -> str:
        return ghost(self.var, "y", self.tag)

    @property
    def month(self) -> str:
        return ghost(self.var, "m", self.tag)

    @property
    def day(self) -> str:
        return ghost(self.var, "d", self.tag)

    @property
    def names(self) -> Tuple[str, str, str]:
        return self.year, self.month, self.day


@dataclass
class Case:
    label: str
    state: ProductState
    value: Any = None


def _parse_ghost(name: str) -> Optional[Tuple[Optional[str], str, str]]:
    tag = None
    if name[:2] in ("u.", "d.") and "#" in name:
        tag, name = name[0], name[2:]
    comp, sep, var = name.partition("#")
    if not sep or comp not in ("y", "m", "d"):
        return None
    return tag, comp, var


def handles_of(state: ProductState) -> List[Handle]:
    """All date triples registered in ``state``."""
    seen = {}
    for name in state.vars:
        p = _parse_ghost(name)
        if p is not None:
            seen[(p[2], p[0] or "")] = Handle(p[2], p[0])
    return [seen[k] for k in sorted(seen)]


def day_of(h: Handle) -> Var:
    return Var(h.day)


def month_of(h: Handle) -> Var:
    return Var(h.month)


def year_of(h: Handle) -> Var:
    return Var(h.year)


# --- concretization --------------------------------------------------------


def gamma_member(state: ProductState, env: Mapping[Handle, Date]) -> bool:
    """Is the date environment ``env`` described by ``state``?

    ``env`` must give a date for every triple registered in the state.
    """
    if state.is_bottom():
        return False
    point: Dict[str, int] = {}
    for h, t in env.items():
        if not valid(t):
            return False
        point[h.year], point[h.month], point[h.day] = t.year, t.month, t.day
    return state.member(point)


# --- strengthening ---------------------------------------------------------


def _year_not_leap(s: ProductState, y: str) -> bool:
    k = s.constant(y)
    if k is not None:
        return not is_leap(k)
    m, c = s.cong_of(y)
    return m % 4 == 0 and m > 0 and c % 4 != 0


def _max_day(month: int, nonleap: bool) -> int:
    if month == 2:
        return 28 if nonleap else 29
    return 30 if month in _THIRTY else 31


def strengthen(s: ProductState, h: Handle) -> ProductState:
    """Remove ghost valuations of ``h`` that are not valid dates."""
    for _ in range(4):
        if s.is_bottom():
            return s
        changed = False
        months = s.values(h.month, 12)
        if months is None:
            lo, hi = s.interval_of(h.month)
            months = list(range(max(1, lo), min(12, hi) + 1))
        nonleap = _year_not_leap(s, h.year)
        dlo, dhi = s.interval_of(h.day)
        keep = [mo for mo in months if _max_day(mo, nonleap) >= dlo and 1 <= mo <= 12]
        if not keep:
            return ProductState.bottom_state(s.vars)
        if len(keep) < len(months):
            s = s.assume_in(h.month, keep)
            changed = True
            if s.is_bottom():
                return s
        top = max(_max_day(mo, nonleap) for mo in keep)
        if dhi > top:
            s = s.assume(Var(h.day) <= top)
            changed = True
            if s.is_bottom():
                return s
        if keep == [2] and s.interval_of(h.day)[0] >= 29:
            k = s.constant(h.year)
            if k is not None:
                if not is_leap(k):
                    return ProductState.bottom_state(s.vars)
            else:
                m, c = s.cong_of(h.year)
                if not (m and m % 4 == 0 and c % 4 == 0):
                    s = s.assume_cong(Var(h.year), 0, 4)
                    changed = True
        if not changed:
            break
    return s


def strengthen_all(s: ProductState, handles: Optional[Iterable[Handle]] = None) -> ProductState:
    hs = list(handles) if handles is not None else handles_of(s)
    for _ in range(3):
        before = s
        for h in hs:
            s = strengthen(s, h)
            if s.is_bottom():
                return s
        if s is before:
            break
    return s


# --- constructors ----------------------------------------------------------


def _register(s: ProductState, h: Handle) -> ProductState:
    if any(n in s.vars for n in h.names):
        raise ValueError(f"date {h.var!r} is already registered")
    return s.add_vars(h.names)


def mk_random_date(s: ProductState, h: Handle, year_range: Optional[Tuple[int, int]] = None) -> ProductState:
    """Any valid date; years bounded only when ``year_range`` is given."""
    s = _register(s, h)
    cond = [Var(h.day) >= 1, Var(h.day) <= 31, Var(h.month) >= 1, Var(h.month) <= 12]
    if year_range is not None:
        cond += [Var(h.year) >= year_range[0], Var(h.year) <= year_range[1]]
    return strengthen(s.assume(conj(cond)), h)


def mk_const_date(s: ProductState, h: Handle, t: Date) -> ProductState:
    s = _register(s, h)
    return s.assume(conj([Var(h.year).eq(t.year), Var(h.month).eq(t.month), Var(h.day).eq(t.day)]))


def copy_date(s: ProductState, src: Handle, dst: Handle) -> ProductState:
    s = _register(s, dst)
    return s.assign_all({a: Var(b) for a, b in zip(dst.names, src.names)})


def _mk_date(s: ProductState, dst: Handle, day, month, year, temps=()) -> ProductState:
    s = _register(s, dst)
    s = s.assign_all({dst.year: year, dst.month: month, dst.day: day})
    if temps:
        s = s.remove(temps)
    return strengthen_all(s, [dst])


def first_day_of(s: ProductState, src: Handle, dst: Handle) -> ProductState:
    return _mk_date(s, dst, 1, Var(src.month), Var(src.year))


def last_day_of(s: ProductState, src: Handle, dst: Handle) -> List[Case]:
    """Case split on the class of the month.

    The February 28 case is kept even for years divisible by 4, which is
    only a necessary condition for being leap.
    """
    m, y = Var(src.month), Var(src.year)
    out = []
    branches = [
        ("31-day month", is_one_of(m, _THIRTY_ONE), 31),
        ("30-day month", is_one_of(m, _THIRTY), 30),
        ("29 Feb.", m.eq(2) & (y % 4).eq(0), 29),
        ("28 Feb.", m.eq(2), 28),
    ]
    for label, guard, days in branches:
        g = s.assume(guard)
        if g.is_bottom():
            continue
        r = _mk_date(g, dst, days, m, y)
        if not r.is_bottom():
            out.append(Case(label, r))
    return out


# --- month addition --------------------------------------------------------


def add_months_abs(r: RoundingMode, s: ProductState, src: Handle, nb_m: int, dst: Handle) -> List[Case]:
    """``dst = src +m nb_m`` rounded with ``r`` (Up or Down).

    The month index is split as ``month - 1 + nb_m = 12*q + rem`` with
    ``0 <= rem <= 11`` (floor semantics), so ``res_month = 1 + rem`` and
    ``res_year = year + q``. The quotient and remainder stay in the state
    while the case guards are applied and are projected away afterwards,
    which keeps ``res_year - year`` exact whenever the guards pin ``q``.
    """
    if not isinstance(nb_m, int):
        raise Unsupported("the number of months must be a constant")
    if r not in (RoundingMode.UP, RoundingMode.DOWN):
        raise ValueError("abstract month addition needs Up or Down rounding")
    day, month, year = Var(src.day), Var(src.month), Var(src.year)
    if nb_m == 0:
        res = copy_date(s, src, dst)
        return [] if res.is_bottom() else [Case(LABELS["none"], strengthen_all(res))]
    tag = dst.day.replace("#", "_")
    q, rem, rm, ry = (f"$q.{tag}", f"$r.{tag}", f"$rm.{tag}", f"$ry.{tag}")
    temps = [q, rem, rm, ry]
    base = s.add_vars(temps)
    base = base.assume((month - 1 + nb_m).eq(12 * Var(q) + Var(rem)) & (Var(rem) >= 0) & (Var(rem) <= 11))
    base = base.assign_all({rm: 1 + Var(rem), ry: year + Var(q)})
    if base.is_bottom():
        return []
    RM, RY = Var(rm), Var(ry)
    guards = [
        ("leap", (day > 29) & RM.eq(2) & (RY % 4).eq(0), 29),
        ("nonleap", (day > 28) & RM.eq(2), 28),
        ("thirty", (day > 30) & is_one_of(RM, _THIRTY), 30),
    ]
    out = []
    for key, guard, target in guards:
        g = base.assume(guard)
        if g.is_bottom():
            continue
        k = g.constant(ry)
        if k is not None and (key == "leap") != is_leap(k) and key != "thirty":
            continue  # exact leap rule on a known year
        if r is RoundingMode.DOWN:
            res = _mk_date(g, dst, target, RM, RY, temps)
        else:
            res = _mk_date(g, dst, 1, 1 + RM % 12, RY + RM // 12, temps)
        # the guard narrowed the source day too
        res = strengthen(res, src)
        if not res.is_bottom():
            out.append(Case(LABELS[key], res))
    res = _mk_date(base, dst, day, RM, RY, temps)
    if not res.is_bottom():
        out.append(Case(LABELS["none"], res))
    return out


def add_period_abs(r: RoundingMode, s: ProductState, src: Handle, p: Period, dst: Handle) -> List[Case]:
    """Year and month additions reduce to one month addition."""
    if p.days:
        raise Unsupported("day additions are not supported by the abstract domain")
    return add_months_abs(r, s, src, 12 * p.years + p.months, dst)


# --- comparisons -----------------------------------------------------------

_DAY_GROUPS = {
    "<": [("<", True), (">=", False)],
    "<=": [("<=", True), (">", False)],
    ">": [("<=", False), (">", True)],
    ">=": [("<", False), (">=", True)],
    "==": [("<", False), ("==", True), (">", False)],
    "!=": [("<", True), ("==", False), (">", True)],
}

_LT_TRUE = {"<": True, "<=": True, ">": False, ">=": False, "==": False, "!=": True}
_GT_TRUE = {"<": False, "<=": False, ">": True, ">=": True, "==": False, "!=": True}


def _rel(a: Var, op: str, b: Var):
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    if op == "==":
        return a.eq(b)
    return a.ne(b)


def dates_cmp(op: str, s: ProductState, h1: Handle, h2: Handle, only: Optional[bool] = None) -> List[Case]:
    """Lexicographic comparison ``h1 op h2``; each case carries its boolean.

    With ``only`` set, the cases of the other boolean are not built.
    """
    y1, y2 = Var(h1.year), Var(h2.year)
    m1, m2 = Var(h1.month), Var(h2.month)
    d1, d2 = Var(h1.day), Var(h2.day)
    out: List[Case] = []

    def emit(label, cond, base, value):
        if only is not None and value != only:
            return
        st = strengthen_all(base.assume(cond))
        if not st.is_bottom():
            out.append(Case(label, st, value))

    emit("year <", y1 < y2, s, _LT_TRUE[op])
    emit("year >", y1 > y2, s, _GT_TRUE[op])
    same_y = s.assume(y1.eq(y2))
    if same_y.is_bottom():
        return out
    emit("month <", m1 < m2, same_y, _LT_TRUE[op])
    emit("month >", m1 > m2, same_y, _GT_TRUE[op])
    same_m = same_y.assume(m1.eq(m2))
    if same_m.is_bottom():
        return out
    for rel, value in _DAY_GROUPS[op]:
        emit(f"day {rel}", _rel(d1, rel, d2), same_m, value)
    return out


def dates_lt(s: ProductState, h1: Handle, h2: Handle) -> List[Case]:
    return dates_cmp("<", s, h1, h2)


def dates_le(s: ProductState, h1: Handle, h2: Handle) -> List[Case]:
    return dates_cmp("<=", s, h1, h2)


def dates_eq(s: ProductState, h1: Handle, h2: Handle) -> List[Case]:
    return dates_cmp("==", s, h1, h2)


def accessor_cmp(s: ProductState, h: Handle, accessor: str, op: str, k: int, only: Optional[bool] = None) -> List[Case]:
    """``<accessor>(h) op k`` split into its true and false cases."""
    v = Var({"day": h.day, "month": h.month, "year": h.year}[accessor])
    holds = _rel(v, op, k)
    from .numdom.expr import negate

    out = []
    for cond, value in ((holds, True), (negate(holds), False)):
        if only is not None and value != only:
            continue
        st = strengthen_all(s.assume(cond))
        if not st.is_bottom():
            out.append(Case(f"{accessor} {op} {k}" if value else f"not {accessor} {op} {k}", st, value))
    return out
