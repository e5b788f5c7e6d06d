import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from datesafe.core import Date, Period, RoundingMode, add_months, add_period, compare, valid
from datesafe.laws import all_dates
from datesafe.numdom import ProductState, Var
from datesafe.ymd import (
    LABELS,
    Handle,
    Unsupported,
    accessor_cmp,
    add_months_abs,
    add_period_abs,
    dates_cmp,
    dates_lt,
    day_of,
    first_day_of,
    gamma_member,
    handles_of,
    last_day_of,
    mk_const_date,
    mk_random_date,
    month_of,
    strengthen,
    year_of,
)
from strategies import valid_dates

UP, DOWN = RoundingMode.UP, RoundingMode.DOWN
D, E, R = Handle("d"), Handle("e"), Handle("r")
TOP = ProductState.top()


def _raw(h, year=None):
    # ghost ranges without strengthening
    s = TOP.add_vars(h.names).assume((day_of(h) >= 1) & (day_of(h) <= 31) & (month_of(h) >= 1) & (month_of(h) <= 12))
    return s if year is None else s.assume(year_of(h).eq(year))


def test_accessors_and_handles():
    assert (day_of(D).name, month_of(D).name, year_of(D).name) == ("d#d", "m#d", "y#d")
    u = Handle("d", "u")
    assert u.names == ("u.y#d", "u.m#d", "u.d#d")
    s = mk_random_date(mk_random_date(TOP, u), Handle("x"))
    assert handles_of(s) == [u, Handle("x")]


def test_gamma_member_examples():
    s = _raw(D, 2023)
    assert gamma_member(s, {D: Date(2023, 1, 31)})
    assert not gamma_member(s, {D: Date(2023, 2, 29)})
    assert not gamma_member(ProductState.bottom_state(D.names), {D: Date(2023, 1, 31)})


def test_random_date_ranges():
    s = mk_random_date(TOP, D)
    assert s.interval_of(D.day) == (1, 31)
    assert s.interval_of(D.month) == (1, 12)
    feb = strengthen(s.assume(month_of(D).eq(2)), D)
    assert feb.interval_of(D.day) == (1, 29)


def test_strengthen_examples():
    s = _raw(D)
    assert strengthen(s.assume(month_of(D).eq(2)), D).interval_of(D.day) == (1, 29)
    jul = s.assume(month_of(D).eq(7))
    assert strengthen(jul, D).interval_of(D.day) == (1, 31)
    # Feb 29 forces a year divisible by 4
    leap = strengthen(s.assume(month_of(D).eq(2) & day_of(D).eq(29)), D)
    assert leap.cong_of(D.year) == (4, 0)
    assert strengthen(s.assume(month_of(D).eq(2) & day_of(D).eq(29) & year_of(D).eq(2023)), D).is_bottom()


def test_strengthen_day_31_excludes_short_months():
    s = strengthen(_raw(D).assume(day_of(D).eq(31)), D)
    for m in range(1, 13):
        narrowed = strengthen(s.assume(month_of(D).eq(m)), D)
        assert narrowed.is_bottom() == (m in (2, 4, 6, 9, 11))


def test_first_day_of():
    s = mk_const_date(TOP, D, Date(2023, 7, 19))
    r = first_day_of(s, D, E)
    assert (r.constant(E.year), r.constant(E.month), r.constant(E.day)) == (2023, 7, 1)
    s = mk_random_date(TOP, D).assume((month_of(D) >= 2) & (month_of(D) <= 3))
    r = first_day_of(s, D, E)
    assert r.interval_of(E.month) == (2, 3) and r.constant(E.day) == 1
    assert r.entails(year_of(E).eq(year_of(D))) and r.entails(month_of(E).eq(month_of(D)))


def test_last_day_of():
    one = last_day_of(mk_const_date(TOP, D, Date(2023, 1, 10)), D, E)
    assert [c.state.constant(E.day) for c in one] == [31]
    four = last_day_of(mk_const_date(TOP, D, Date(2023, 4, 10)), D, E)
    assert [c.state.constant(E.day) for c in four] == [30]
    feb = last_day_of(mk_random_date(TOP, D).assume(month_of(D).eq(2) & year_of(D).eq(2020)), D, E)
    assert sorted(c.state.constant(E.day) for c in feb) == [28, 29]


def _by_label(cases):
    return {c.label: c.state for c in cases}


def test_add_months_thirty_day_case():
    cases = _by_label(add_months_abs(DOWN, mk_random_date(TOP, D), D, 1, E))
    s = cases[LABELS["thirty"]]
    assert s.constant(E.day) == 30
    assert s.set_of(D.month) == frozenset({3, 5, 8, 10})
    assert s.set_of(E.month) == frozenset({4, 6, 9, 11})
    assert s.entails(year_of(E).eq(year_of(D)))


def test_add_months_leap_day_up():
    s = mk_random_date(TOP, D)
    cases = _by_label(add_months_abs(UP, s, D, 24, E))
    st = cases[LABELS["nonleap"]]
    assert st.constant(D.month) == 2 and st.constant(D.day) == 29
    assert st.constant(E.month) == 3 and st.constant(E.day) == 1
    assert st.entails(year_of(E).eq(year_of(D) + 2))
    assert st.cong_of(D.year) == (4, 0)


def test_add_months_no_rounding_possible():
    cases = add_months_abs(DOWN, mk_const_date(TOP, D, Date(2023, 6, 15)), D, 1, E)
    assert [c.label for c in cases] == [LABELS["none"]]
    st = cases[0].state
    assert (st.constant(E.year), st.constant(E.month), st.constant(E.day)) == (2023, 7, 15)


def test_add_period_abs():
    s = mk_random_date(TOP, D)
    a = add_period_abs(UP, s, D, Period(2, 0, 0), E)
    b = add_months_abs(UP, s, D, 24, E)
    assert [c.label for c in a] == [c.label for c in b]
    zero = add_period_abs(DOWN, s, D, Period(0, 0, 0), E)
    assert len(zero) == 1
    for comp in ("year", "month", "day"):
        assert zero[0].state.entails(Var(getattr(E, comp)).eq(Var(getattr(D, comp))))
    with pytest.raises(Unsupported):
        add_period_abs(DOWN, s, D, Period(0, 0, 5), E)
    with pytest.raises(ValueError):
        add_months_abs(RoundingMode.ABORT, s, D, 1, E)


def test_next_month_formula():
    # Up rounding lands on (res_month mod 12 + 1, res_year + res_month div 12)
    for rm in range(1, 13):
        want = add_months(Date(2023, rm, 1), 1)
        assert (2023 + rm // 12, rm % 12 + 1) == (want.year, want.month)


SAMPLE_YEARS = (1999, 2000, 2001, 2023, 2024, 2100, 2101)


@pytest.fixture(scope="module")
def sample_dates():
    return all_dates(SAMPLE_YEARS)


@pytest.mark.parametrize("mode", [UP, DOWN])
def test_add_months_sound_and_exclusive(mode, sample_dates):
    s = mk_random_date(TOP, D)
    for n in range(-25, 26):
        cases = add_months_abs(mode, s, D, n, E)
        for t in sample_dates:
            env = {D: t, E: add_period(mode, t, Period(0, n, 0))}
            hits = [c.label for c in cases if gamma_member(c.state, env)]
            assert hits, (t, n)
            if mode is DOWN or len(hits) > 1:
                # only the two February guards may overlap, and only under Up
                assert len(hits) == 1 or (mode is UP and set(hits) == {LABELS["leap"], LABELS["nonleap"]}), (t, n, hits)


def test_dates_lt_against_first_of_march():
    s = mk_random_date(TOP, D)
    s = mk_random_date(s, E).assume(month_of(E).eq(3) & day_of(E).eq(1))
    true_cases = [c for c in dates_lt(s, D, E) if c.value]
    assert sorted(c.label for c in true_cases) == ["month <", "year <"]
    month_case = next(c for c in true_cases if c.label == "month <")
    assert month_case.state.interval_of(D.month) == (1, 2)


def test_dates_lt_irreflexive():
    s = mk_random_date(TOP, D)
    s = s.add_vars(E.names).assign_all({a: Var(b) for a, b in zip(E.names, D.names)})
    assert not any(c.value for c in dates_lt(s, D, E))


def test_dates_lt_constants():
    s = mk_const_date(mk_const_date(TOP, D, Date(2023, 1, 1)), E, Date(2023, 1, 2))
    cases = dates_lt(s, D, E)
    assert [(c.label, c.value) for c in cases] == [("day <", True)]


def test_only_filter():
    s = mk_random_date(mk_random_date(TOP, D), E)
    both = dates_cmp("<=", s, D, E)
    assert [c.label for c in dates_cmp("<=", s, D, E, only=True)] == [c.label for c in both if c.value]
    assert [c.label for c in dates_cmp("<=", s, D, E, only=False)] == [c.label for c in both if not c.value]


_OPS = ("<", "<=", ">", ">=", "==", "!=")
_PY = {"<": lambda c: c < 0, "<=": lambda c: c <= 0, ">": lambda c: c > 0, ">=": lambda c: c >= 0, "==": lambda c: c == 0, "!=": lambda c: c != 0}


@pytest.fixture(scope="module")
def two_random():
    return mk_random_date(mk_random_date(TOP, D), E)


@settings(max_examples=300)
@given(st.sampled_from(_OPS), valid_dates(1990, 2030), valid_dates(1990, 2030))
def test_dates_cmp_exact(two_random, op, a, b):
    cases = dates_cmp(op, two_random, D, E)
    hits = [c for c in cases if gamma_member(c.state, {D: a, E: b})]
    assert len(hits) == 1
    assert hits[0].value == _PY[op](int(compare(a, b)))


@settings(max_examples=200)
@given(st.sampled_from(("day", "month", "year")), st.sampled_from(_OPS), st.integers(0, 32), valid_dates(1999, 2002))
def test_accessor_cmp_exact(acc, op, k, t):
    if acc == "year":
        k += 1985
    s = mk_random_date(TOP, D)
    hits = [c for c in accessor_cmp(s, D, acc, op, k) if gamma_member(c.state, {D: t})]
    want = _PY[op]((getattr(t, acc) > k) - (getattr(t, acc) < k))
    assert want in [c.value for c in hits]
    if op not in ("==", "!="):
        # a disequality inside an interval is not convex, so only order tests are exact
        assert len(hits) == 1


STRENGTHEN_YEARS = all_dates((1900, 2000, 2023, 2024))

conds = st.lists(
    st.tuples(st.sampled_from(("day", "month", "year")), st.sampled_from(_OPS), st.integers(0, 32)),
    max_size=3,
)


@settings(max_examples=150)
@given(conds)
def test_strengthen_keeps_valid_dates(cs):
    s = _raw(D)
    for acc, op, k in cs:
        if acc == "year":
            k = 1890 + 5 * k
        s = s.assume({"<": Var.__lt__, "<=": Var.__le__, ">": Var.__gt__, ">=": Var.__ge__, "==": Var.eq, "!=": Var.ne}[op](Var(getattr(D, acc)), k))
    t = strengthen(s, D)
    assert t.leq(s)
    for d in STRENGTHEN_YEARS:
        if s.member({D.year: d.year, D.month: d.month, D.day: d.day}):
            assert gamma_member(t, {D: d}), d
