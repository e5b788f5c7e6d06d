"""Gregorian year/month/day arithmetic under explicit rounding modes.

Dates are plain ``(year, month, day)`` triples over the proleptic Gregorian
calendar. Additions of years and months may produce day-invalid triples such
as ``(2006, 2, 29)``; a rounding step (``Up``, ``Down`` or ``Abort``) resolves
them. ``BOTTOM`` is the error value and is absorbing.

    >>> add_period(RoundingMode.DOWN, Date(2004, 2, 29), Period(years=2))
    Date(year=2006, month=2, day=28)
    >>> add_period(RoundingMode.UP, Date(2004, 2, 29), Period(years=2))
    Date(year=2006, month=3, day=1)
    >>> add_period(RoundingMode.ABORT, Date(2004, 2, 29), Period(years=2))
    ⊥
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Date",
    "BOTTOM",
    "Bottom",
    "DateValue",
    "Period",
    "RoundingMode",
    "Ordering",
    "is_leap",
    "nb_days",
    "valid",
    "add_years",
    "add_months",
    "add_days",
    "round_date",
    "add_period",
    "compare",
    "is_ambiguous",
    "render",
    "parse_iso",
]

_THIRTY_DAY_MONTHS = frozenset({4, 6, 9, 11})


class RoundingMode(enum.Enum):
    UP = "up"
    DOWN = "down"
    ABORT = "abort"

    @property
    def symbol(self) -> str:
        return {"up": "↑", "down": "↓", "abort": "⊥"}[self.value]


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True, order=True)
class Date:
    """A ``(year, month, day)`` triple; not necessarily a valid date."""

    year: int
    month: int
    day: int

    def __str__(self) -> str:
        return render(self)

    @property
    def is_valid(self) -> bool:
        return valid(self)


class Bottom:
    """The error value. A singleton."""

    _instance: "Bottom | None" = None

    def __new__(cls) -> "Bottom":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "⊥"

    __str__ = __repr__

    def __reduce__(self):
        return (Bottom, ())


BOTTOM = Bottom()

DateValue = Union[Date, Bottom]


@dataclass(frozen=True)
class Period:
    years: int = 0
    months: int = 0
    days: int = 0

    def __add__(self, other: "Period") -> "Period":
        return Period(self.years + other.years, self.months + other.months, self.days + other.days)

    def __str__(self) -> str:
        return f"[{self.years} years, {self.months} months, {self.days} days]"


def is_leap(y: int) -> bool:
    return y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)


def nb_days(y: int, m: int) -> int:
    """Number of days of month ``m`` of year ``y``."""
    if not 1 <= m <= 12:
        raise ValueError(f"month out of range: {m}")
    if m == 2:
        return 29 if is_leap(y) else 28
    return 30 if m in _THIRTY_DAY_MONTHS else 31


def valid(t: DateValue) -> bool:
    if not isinstance(t, Date):
        return False
    return 1 <= t.month <= 12 and 1 <= t.day <= nb_days(t.year, t.month)


def add_years(t: DateValue, n: int) -> DateValue:
    if isinstance(t, Bottom):
        return BOTTOM
    return Date(t.year + n, t.month, t.day)


def add_months(t: DateValue, n: int) -> DateValue:
    """Month addition; the day is kept even when it becomes invalid.

    Closed form of the recursive over/under rules: the month index is
    normalized with floor division, so negative counts wrap into 1..12.
    """
    if isinstance(t, Bottom):
        return BOTTOM
    q, r = divmod(t.month - 1 + n, 12)
    return Date(t.year + q, r + 1, t.day)


# Day ordinals (days since 0000-03-01 shifted), valid for any integer year.
def _days_from_civil(y: int, m: int, d: int) -> int:
    y -= m <= 2
    era = y // 400
    yoe = y - era * 400
    mp = (m + 9) % 12
    doy = (153 * mp + 2) // 5 + d - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    return era * 146097 + doe


def _civil_from_days(z: int) -> Date:
    era = z // 146097
    doe = z - era * 146097
    yoe = (doe - doe // 1460 + doe // 36524 - doe // 146096) // 365
    y = yoe + era * 400
    doy = doe - (365 * yoe + yoe // 4 - yoe // 100)
    mp = (5 * doy + 2) // 153
    d = doy - (153 * mp + 2) // 5 + 1
    m = mp + 3 if mp < 10 else mp - 9
    return Date(y + (m <= 2), m, d)


def add_days(v: DateValue, n: int) -> DateValue:
    """Day addition. Any invalid starting triple yields ``BOTTOM``.

    From a valid date the step-by-step rules coincide with ordinal
    arithmetic, which is what is computed here.
    """
    if not valid(v):
        return BOTTOM
    return _civil_from_days(_days_from_civil(v.year, v.month, v.day) + n)


def round_date(r: RoundingMode, v: DateValue) -> DateValue:
    if isinstance(v, Bottom):
        return BOTTOM
    if v.day < 1 or not 1 <= v.month <= 12:
        return BOTTOM
    last = nb_days(v.year, v.month)
    if v.day <= last:
        return v
    if r is RoundingMode.DOWN:
        return Date(v.year, v.month, last)
    if r is RoundingMode.UP:
        nxt = add_months(v, 1)
        return Date(nxt.year, nxt.month, 1)
    return BOTTOM


def add_period(r: RoundingMode, v: DateValue, p: Period) -> DateValue:
    """``rnd_r((v +y years) +m months) +d days``: one rounding, before days."""
    return add_days(round_date(r, add_months(add_years(v, p.years), p.months)), p.days)


def compare(a: Date, b: Date) -> Ordering:
    if not (valid(a) and valid(b)):
        raise ValueError(f"cannot compare invalid dates {a!r} and {b!r}")
    ka = (a.year, a.month, a.day)
    kb = (b.year, b.month, b.day)
    return Ordering.LT if ka < kb else Ordering.GT if ka > kb else Ordering.EQ


def is_ambiguous(v: Date, p: Period) -> bool:
    if not valid(v):
        raise ValueError(f"invalid date {v!r}")
    return add_period(RoundingMode.ABORT, v, p) is BOTTOM


def render(v: DateValue) -> str:
    if isinstance(v, Bottom):
        return "⊥"
    if v.year < 0:
        return f"-{-v.year:04d}-{v.month:02d}-{v.day:02d}"
    return f"{v.year:04d}-{v.month:02d}-{v.day:02d}"


def parse_iso(text: str) -> Date:
    """Parse ``YYYY-MM-DD`` into a (not necessarily valid) triple."""
    text = text.strip()
    neg = text.startswith("-")
    parts = text[1:].split("-") if neg else text.split("-")
    if len(parts) != 3 or not all(p.isdigit() for p in parts):
        raise ValueError(f"not an ISO date: {text!r}")
    y, m, d = (int(p) for p in parts)
    return Date(-y if neg else y, m, d)
