"""Executable checks of the algebraic laws of date arithmetic.

Each ``check_*`` function runs one law over a finite set of dates and
month counts and returns the counter-examples it met (an empty list means
the law held on that set). The ``find_*`` functions search for witnesses
of the laws that do *not* hold, such as commutativity of period addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .core import (
    Bottom,
    Date,
    DateValue,
    Period,
    RoundingMode,
    add_months,
    add_period,
    add_years,
    nb_days,
    round_date,
    valid,
)

__all__ = [
    "all_dates",
    "Violation",
    "check_year_month_equivalence",
    "check_monotonicity",
    "check_down_le_up",
    "check_characterization",
    "check_well_formedness",
    "loose_monotonicity_witnesses",
    "Witness",
    "find_noncommutativity",
    "find_nonassociativity",
    "add_seq",
]

ROUNDING = (RoundingMode.DOWN, RoundingMode.UP)


def all_dates(years: Iterable[int]) -> List[Date]:
    """Every valid date of the given years, sorted."""
    return [
        Date(y, m, d)
        for y in sorted(set(years))
        for m in range(1, 13)
        for d in range(1, nb_days(y, m) + 1)
    ]


@dataclass(frozen=True)
class Violation:
    law: str
    date: Date
    n: int
    detail: str


def _le(a: DateValue, b: DateValue) -> bool:
    return (a.year, a.month, a.day) <= (b.year, b.month, b.day)


def check_year_month_equivalence(dates: Sequence[Date], years: Iterable[int]) -> List[Violation]:
    out = []
    years = list(years)
    for t in dates:
        for n in years:
            if add_years(t, n) != add_months(t, 12 * n):
                out.append(Violation("year-month", t, n, f"{add_years(t, n)} vs {add_months(t, 12 * n)}"))
    return out


def check_monotonicity(dates: Sequence[Date], months: Iterable[int], modes=ROUNDING) -> List[Violation]:
    """``d1 < d2`` implies ``d1 + p <= d2 + p``.

    ``dates`` must be sorted; since ``<=`` is total, comparing neighbours
    covers every pair by transitivity.
    """
    out = []
    for r in modes:
        for n in months:
            p = Period(0, n, 0)
            prev = None
            for t in dates:
                v = add_period(r, t, p)
                if prev is not None and not _le(prev[1], v):
                    out.append(Violation(f"monotonicity-{r.value}", t, n, f"{prev[0]} -> {prev[1]} but {t} -> {v}"))
                prev = (t, v)
    return out


def loose_monotonicity_witnesses(dates: Sequence[Date], months: Iterable[int], modes=ROUNDING) -> Iterator[Tuple[RoundingMode, Date, Date, int, Date]]:
    """Neighbouring ``d1 < d2`` that land on the same date (strict bound fails)."""
    for r in modes:
        for n in months:
            p = Period(0, n, 0)
            prev = None
            for t in dates:
                v = add_period(r, t, p)
                if prev is not None and prev[1] == v:
                    yield r, prev[0], t, n, v
                prev = (t, v)


def check_down_le_up(dates: Sequence[Date], months: Iterable[int]) -> List[Violation]:
    """Down never exceeds Up, and a non-error Abort result is shared by all modes."""
    out = []
    for t in dates:
        for n in months:
            p = Period(0, n, 0)
            down = add_period(RoundingMode.DOWN, t, p)
            up = add_period(RoundingMode.UP, t, p)
            ab = add_period(RoundingMode.ABORT, t, p)
            if not _le(down, up):
                out.append(Violation("down-le-up", t, n, f"{down} > {up}"))
            if not isinstance(ab, Bottom) and not (ab == down == up):
                out.append(Violation("abort-agrees", t, n, f"{ab}, {down}, {up}"))
            if isinstance(ab, Bottom) == (down == up):
                out.append(Violation("ambiguity", t, n, f"abort {ab}, down {down}, up {up}"))
    return out


def check_characterization(dates: Sequence[Date], months: Iterable[int]) -> List[Violation]:
    """The month sum overflows its month exactly when Abort rounding fails."""
    out = []
    for t in dates:
        for n in months:
            v = add_months(t, n)
            overflow = nb_days(v.year, v.month) < v.day
            fails = isinstance(round_date(RoundingMode.ABORT, v), Bottom)
            if overflow != fails:
                out.append(Violation("characterization", t, n, f"{v}: overflow={overflow}, abort fails={fails}"))
    return out


def check_well_formedness(dates: Sequence[Date], months: Iterable[int], modes=ROUNDING) -> List[Violation]:
    out = []
    for r in modes:
        for t in dates:
            for n in months:
                v = add_period(r, t, Period(0, n, 0))
                if isinstance(v, Bottom) or not valid(v):
                    out.append(Violation(f"well-formed-{r.value}", t, n, str(v)))
    return out


# --- witnesses of non-properties --------------------------------------------


def add_seq(r: RoundingMode, t: DateValue, periods: Iterable[Period]) -> DateValue:
    """Add the periods one after the other, rounding after each."""
    for p in periods:
        t = add_period(r, t, p)
    return t


@dataclass(frozen=True)
class Witness:
    mode: RoundingMode
    date: Date
    p1: Period
    p2: Period
    left: DateValue
    right: DateValue


def _by_size(k: int) -> List[int]:
    # 1, -1, 2, -2, ...
    return [x for n in range(1, k + 1) for x in (n, -n)]


def _search_periods(max_months: int, max_days: int) -> List[Period]:
    months = [Period(0, m, 0) for m in _by_size(max_months)]
    days = [Period(0, 0, d) for d in _by_size(max_days)]
    return months + days


def find_noncommutativity(mode: RoundingMode, dates: Sequence[Date], max_months: int = 13, max_days: int = 40) -> Optional[Witness]:
    """First ``(d + p1) + p2 != (d + p2) + p1``, pairing a month and a day period."""
    periods = _search_periods(max_months, max_days)
    month_ps = [p for p in periods if p.months]
    day_ps = [p for p in periods if p.days]
    for t in dates:
        for p1 in day_ps:
            for p2 in month_ps:
                a = add_seq(mode, t, (p1, p2))
                b = add_seq(mode, t, (p2, p1))
                if a != b:
                    return Witness(mode, t, p1, p2, a, b)
    return None


def find_nonassociativity(mode: RoundingMode, dates: Sequence[Date], max_months: int = 13) -> Optional[Witness]:
    """First ``(d + p1) + p2 != d + (p1 + p2)`` over month periods."""
    ps = [Period(0, m, 0) for m in _by_size(max_months)]
    for t in dates:
        for p1 in ps:
            for p2 in ps:
                a = add_seq(mode, t, (p1, p2))
                b = add_period(mode, t, p1 + p2)
                if a != b:
                    return Witness(mode, t, p1, p2, a, b)
    return None
