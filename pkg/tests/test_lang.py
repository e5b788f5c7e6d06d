import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from datesafe import lang as L
from datesafe.core import Date, Period
from datesafe.fuzz import random_program
from strategies import valid_dates

LISTING = """\
date current = random_date();
date birthday = random_date();
date intermediate = birthday + [2 years, 0 months, 0 days];
date limit = first_day_of(intermediate);
assert(sync(current < limit));
"""


def test_parse_listing():
    prog = L.parse(LISTING)
    assert len(prog) == 5
    decl = prog.stmts[2]
    assert isinstance(decl, L.DateDecl) and decl.name == "intermediate"
    assert decl.expr == L.AddPeriod(L.Var("birthday"), Period(2, 0, 0))
    last = prog.stmts[4]
    assert isinstance(last, L.Assert)
    assert last.cond == L.Sync(L.Cmp(L.Var("current"), "<", L.Var("limit")))
    assert (last.loc.line, last.loc.col) == (5, 1)
    assert prog.source_line(5) == "assert(sync(current < limit));"


def test_comments_and_literals():
    prog = L.parse("# header\ndate a = 2024-02-29; # trailing\nassert(a == 2024-02-29);\n")
    assert prog.stmts[0].expr == L.Literal(Date(2024, 2, 29))


def test_period_chain_is_left_nested():
    prog = L.parse("date a = random_date();\ndate b = a + [1 years, 0 months, 0 days] + [0 years, -1 months, 3 days];\n")
    e = prog.stmts[1].expr
    assert e == L.AddPeriod(L.AddPeriod(L.Var("a"), Period(1, 0, 0)), Period(0, -1, 3))


def test_accessor_both_sides():
    prog = L.parse("date a = random_date();\nassume(day_of(a) <= 28);\nassume(3 < month_of(a));\n")
    assert prog.stmts[1].cond == L.AccessorCmp("day", L.Var("a"), "<=", 28)
    assert prog.stmts[2].cond == L.AccessorCmp("month", L.Var("a"), ">", 3)


def test_precedence():
    prog = L.parse("date a = random_date();\nassert(a < a || a == a && !(a != a));\n")
    cond = prog.stmts[1].cond
    assert isinstance(cond, L.Or)
    assert isinstance(cond.right, L.And)
    assert isinstance(cond.right.right, L.Not)


@pytest.mark.parametrize(
    "source, kind, line, col",
    [
        ("date a = 2023-02-30;\n", "invalid-literal", 1, 10),
        ("date a = b;\n", "use-before-def", 1, 10),
        ("date a = random_date();\ndate a = random_date();\n", "redefinition", 2, 1),
        ("date a = random_date()\n", "syntax", 2, 1),
        ("date a = random_date();\nassume(sync(a < a));\n", "syntax", 2, 8),
        ("date a = random_date();\nassert(sync(sync(a < a)));\n", "syntax", 2, 13),
        ("date a = random_date();\nassert(a ~ a);\n", "syntax", 2, 10),
        ("date a = random_date() + [1 months];\n", "syntax", 1, 29),
    ],
)
def test_errors(source, kind, line, col):
    with pytest.raises(L.ParseError) as info:
        L.parse(source)
    assert info.value.kind == kind
    assert (info.value.line, info.value.col) == (line, col)


def test_free_vars_and_contains_sync():
    prog = L.parse("date a = random_date();\ndate b = a;\nassert(sync(a < b) && b == a);\n")
    cond = prog.stmts[2].cond
    assert L.free_vars(cond) == ["a", "b"]
    assert L.contains_sync(cond)
    assert not L.contains_sync(cond.right)


def test_render_listing_is_identity():
    assert L.render(L.parse(LISTING)) == LISTING


# --- round trip -------------------------------------------------------------

NAMES = ("a", "b", "c")
OPS = st.sampled_from(L.RELOPS)


def _periods():
    return st.builds(Period, st.integers(-9, 9), st.integers(-30, 30), st.integers(-40, 40))


date_exprs = st.recursive(
    st.one_of(st.sampled_from(NAMES).map(L.Var), valid_dates(1900, 2100).map(L.Literal), st.just(L.RandomDate())),
    lambda inner: st.one_of(
        st.builds(L.AddPeriod, inner, _periods()),
        st.builds(L.FirstDayOf, inner),
        st.builds(L.LastDayOf, inner),
    ),
    max_leaves=4,
)

atoms = st.one_of(
    st.builds(L.Cmp, date_exprs, OPS, date_exprs),
    st.builds(L.AccessorCmp, st.sampled_from(("day", "month", "year")), date_exprs, OPS, st.integers(-50, 3000)),
)


def _bool(inner):
    return st.one_of(st.builds(L.And, inner, inner), st.builds(L.Or, inner, inner), st.builds(L.Not, inner))


plain_bools = st.recursive(atoms, _bool, max_leaves=5)
assert_bools = st.recursive(st.one_of(atoms, st.builds(L.Sync, plain_bools)), _bool, max_leaves=5)


@st.composite
def programs(draw):
    stmts = [L.DateDecl(n, draw(st.one_of(st.just(L.RandomDate()), valid_dates().map(L.Literal)))) for n in NAMES]
    for _ in range(draw(st.integers(0, 4))):
        kind = draw(st.sampled_from(("assume", "assert")))
        stmts.append(L.Assume(draw(plain_bools)) if kind == "assume" else L.Assert(draw(assert_bools)))
    return L.Program(tuple(stmts))


@given(programs())
def test_render_parse_round_trip(prog):
    text = L.render(prog)
    again = L.parse(text)
    assert again == prog
    assert L.render(again) == text


@given(st.integers(0, 2**32))
def test_generated_programs_round_trip(seed):
    src = random_program(random.Random(seed))
    prog = L.parse(src)
    assert L.parse(L.render(prog)) == prog
