import calendar
import datetime

import pytest
from hypothesis import given
from hypothesis import strategies as st

from datesafe.core import (
    BOTTOM,
    Bottom,
    Date,
    Ordering,
    Period,
    RoundingMode,
    add_days,
    add_months,
    add_period,
    add_years,
    compare,
    is_ambiguous,
    is_leap,
    nb_days,
    parse_iso,
    render,
    round_date,
    valid,
)
from strategies import month_periods, periods, proleptic_dates, triples, valid_dates

UP, DOWN, ABORT = RoundingMode.UP, RoundingMode.DOWN, RoundingMode.ABORT


@pytest.mark.parametrize("y, leap", [(2004, True), (2000, True), (1900, False), (2023, False), (2100, False)])
def test_is_leap_examples(y, leap):
    assert is_leap(y) is leap


@given(st.integers(1, 9999))
def test_is_leap_matches_calendar(y):
    assert is_leap(y) == calendar.isleap(y)


@pytest.mark.parametrize("y, m, n", [(2023, 1, 31), (2020, 2, 29), (2023, 4, 30), (2023, 2, 28), (1900, 2, 28)])
def test_nb_days_examples(y, m, n):
    assert nb_days(y, m) == n


@given(st.integers(1, 9999), st.integers(1, 12))
def test_nb_days_matches_calendar(y, m):
    assert nb_days(y, m) == calendar.monthrange(y, m)[1]


@pytest.mark.parametrize("m", [0, 13, -1])
def test_nb_days_rejects_bad_month(m):
    with pytest.raises(ValueError):
        nb_days(2023, m)


def test_add_years_examples():
    assert add_years(Date(2004, 2, 29), 2) == Date(2006, 2, 29)
    assert add_years(Date(2023, 6, 15), 0) == Date(2023, 6, 15)
    assert add_years(Date(2023, 6, 15), -24) == Date(1999, 6, 15)


def test_add_months_examples():
    assert add_months(Date(2023, 1, 31), 1) == Date(2023, 2, 31)
    assert add_months(Date(2023, 11, 5), 3) == Date(2024, 2, 5)
    assert add_months(Date(2023, 1, 10), -1) == Date(2022, 12, 10)


def _months_oracle(t, n):
    # count months from year 0 the slow way
    total = t.year * 12 + (t.month - 1) + n
    return Date(total // 12, total % 12 + 1, t.day)


@given(triples(), st.integers(-2000, 2000))
def test_add_months_matches_month_count(t, n):
    assert add_months(t, n) == _months_oracle(t, n)


def test_add_days_examples():
    assert add_days(Date(2023, 1, 29), 30) == Date(2023, 2, 28)
    assert add_days(Date(2023, 3, 1), -1) == Date(2023, 2, 28)
    assert add_days(Date(2023, 4, 31), 1) is BOTTOM


@given(valid_dates(3, 9997), st.integers(-700, 700))
def test_add_days_matches_datetime(t, n):
    got = add_days(t, n)
    want = datetime.date(t.year, t.month, t.day) + datetime.timedelta(days=n)
    assert got == Date(want.year, want.month, want.day)


def test_round_examples():
    assert round_date(DOWN, Date(2006, 2, 29)) == Date(2006, 2, 28)
    assert round_date(UP, Date(2006, 2, 29)) == Date(2006, 3, 1)
    assert round_date(ABORT, Date(2023, 4, 31)) is BOTTOM
    assert round_date(UP, Date(2023, 12, 32)) == Date(2024, 1, 1)
    for r in RoundingMode:
        assert round_date(r, Date(2023, 5, 0)) is BOTTOM
        assert round_date(r, BOTTOM) is BOTTOM
        assert round_date(r, Date(2023, 13, 1)) is BOTTOM
        assert round_date(r, Date(2023, 5, 17)) == Date(2023, 5, 17)


def test_add_period_examples():
    assert add_period(DOWN, Date(2004, 2, 29), Period(2, 0, 0)) == Date(2006, 2, 28)
    assert add_period(UP, Date(2004, 2, 29), Period(2, 0, 0)) == Date(2006, 3, 1)
    assert add_period(ABORT, Date(2004, 2, 29), Period(2, 0, 0)) is BOTTOM
    # one rounding after the years and months, never in between
    assert add_period(UP, Date(2020, 2, 29), Period(1, 1, 0)) == Date(2021, 3, 29)
    assert add_period(ABORT, Date(2023, 1, 31), Period(0, 1, 0)) is BOTTOM


def test_bottom_absorbs():
    assert add_years(BOTTOM, 3) is BOTTOM
    assert add_months(BOTTOM, 3) is BOTTOM
    assert add_days(BOTTOM, 3) is BOTTOM
    for r in RoundingMode:
        assert add_period(r, BOTTOM, Period(1, 1, 1)) is BOTTOM
    assert Bottom() is BOTTOM


def test_compare_examples():
    assert compare(Date(2023, 2, 28), Date(2023, 3, 1)) is Ordering.LT
    assert compare(Date(2023, 3, 1), Date(2023, 3, 1)) is Ordering.EQ
    assert compare(Date(2024, 1, 1), Date(2023, 12, 31)) is Ordering.GT
    with pytest.raises(ValueError):
        compare(Date(2023, 2, 30), Date(2023, 3, 1))


@given(valid_dates(), valid_dates())
def test_compare_matches_datetime(a, b):
    da, db = datetime.date(a.year, a.month, a.day), datetime.date(b.year, b.month, b.day)
    want = Ordering.LT if da < db else Ordering.GT if da > db else Ordering.EQ
    assert compare(a, b) is want


def test_is_ambiguous_examples():
    assert is_ambiguous(Date(2004, 2, 29), Period(2, 0, 0))
    assert not is_ambiguous(Date(2023, 6, 15), Period(0, 1, 0))
    assert is_ambiguous(Date(2023, 3, 31), Period(0, 1, 0))


def _abort_oracle(t, p):
    # ambiguous iff the month-shifted day does not exist in the target month
    y, m = divmod((t.year + p.years) * 12 + t.month - 1 + p.months, 12)
    return t.day > calendar.monthrange(2000 + y % 400, m + 1)[1]


@given(proleptic_dates(), month_periods())
def test_ambiguity_oracle(t, p):
    assert is_ambiguous(t, p) == _abort_oracle(t, p)


@given(proleptic_dates(), periods())
def test_well_formed_and_ordered(t, p):
    down, up, ab = (add_period(r, t, p) for r in (DOWN, UP, ABORT))
    assert valid(down) and valid(up)
    assert (down.year, down.month, down.day) <= (up.year, up.month, up.day)
    if not isinstance(ab, Bottom):
        assert ab == down == up


@given(proleptic_dates(), month_periods())
def test_ambiguous_iff_modes_differ(t, p):
    assert is_ambiguous(t, p) == (add_period(DOWN, t, p) != add_period(UP, t, p))


@given(triples(), st.integers(-400, 400))
def test_year_month_equivalence(t, n):
    assert add_years(t, n) == add_months(t, 12 * n)


@given(proleptic_dates(), st.integers(-100, 100))
def test_down_and_up_targets(t, n):
    # Down lands on the last day of the shifted month, Up on the next month's first day
    v = add_months(t, n)
    last = nb_days(v.year, v.month)
    if v.day <= last:
        assert add_period(DOWN, t, Period(0, n, 0)) == v
    else:
        assert add_period(DOWN, t, Period(0, n, 0)) == Date(v.year, v.month, last)
        assert add_period(UP, t, Period(0, n, 0)) == add_months(Date(v.year, v.month, 1), 1)


def test_render_and_parse():
    assert render(Date(2023, 3, 5)) == "2023-03-05"
    assert render(BOTTOM) == "⊥"
    assert render(Date(-44, 3, 15)) == "-0044-03-15"
    assert parse_iso("2023-03-05") == Date(2023, 3, 5)
    assert parse_iso("-0044-03-15") == Date(-44, 3, 15)
    assert parse_iso("2023-02-30") == Date(2023, 2, 30)  # triples, not necessarily valid
    with pytest.raises(ValueError):
        parse_iso("2023/03/05")


@given(proleptic_dates())
def test_render_round_trip(t):
    assert parse_iso(render(t)) == t


def test_rounding_symbols():
    assert [r.symbol for r in (UP, DOWN, ABORT)] == ["↑", "↓", "⊥"]
