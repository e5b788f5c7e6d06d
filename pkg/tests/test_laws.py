import pytest

from datesafe.core import Date, Period, RoundingMode, add_period
from datesafe.laws import (
    add_seq,
    all_dates,
    check_characterization,
    check_down_le_up,
    check_monotonicity,
    check_well_formedness,
    check_year_month_equivalence,
    find_nonassociativity,
    find_noncommutativity,
    loose_monotonicity_witnesses,
)

UP, DOWN = RoundingMode.UP, RoundingMode.DOWN
YEARS = (1900, 2000, 2023, 2024)
MONTHS = range(-25, 26)


@pytest.fixture(scope="module")
def dates():
    return all_dates(YEARS)


def test_all_dates_counts():
    assert len(all_dates([2023])) == 365
    assert len(all_dates([2024, 2024])) == 366
    assert all_dates([2023])[0] == Date(2023, 1, 1)


def test_year_month_equivalence(dates):
    assert check_year_month_equivalence(dates, range(-5, 6)) == []


def test_monotonicity(dates):
    assert check_monotonicity(dates, MONTHS) == []


def test_monotonicity_is_not_strict(dates):
    hits = list(loose_monotonicity_witnesses(dates, [1], modes=(DOWN,)))
    assert (DOWN, Date(2023, 1, 30), Date(2023, 1, 31), 1, Date(2023, 2, 28)) in hits


def test_down_le_up_and_ambiguity(dates):
    assert check_down_le_up(dates, MONTHS) == []


def test_characterization(dates):
    assert check_characterization(dates, MONTHS) == []


def test_well_formedness(dates):
    assert check_well_formedness(dates, MONTHS) == []


def test_checkers_report_violations():
    # a deliberately broken mode list: Abort results are not always valid dates
    bad = check_well_formedness([Date(2023, 1, 31)], [1], modes=(RoundingMode.ABORT,))
    assert len(bad) == 1 and bad[0].n == 1


@pytest.mark.parametrize("mode", [UP, DOWN])
def test_noncommutativity_witness(mode):
    w = find_noncommutativity(mode, all_dates([2023]))
    assert w is not None
    assert add_seq(mode, w.date, (w.p1, w.p2)) == w.left
    assert add_seq(mode, w.date, (w.p2, w.p1)) == w.right
    assert w.left != w.right


def test_noncommutativity_known_instance():
    # 2023-01-31: +1 month then -1 day vs -1 day then +1 month
    t = Date(2023, 1, 31)
    a = add_seq(DOWN, t, (Period(0, 1, 0), Period(0, 0, -1)))
    b = add_seq(DOWN, t, (Period(0, 0, -1), Period(0, 1, 0)))
    assert (a, b) == (Date(2023, 2, 27), Date(2023, 2, 28))


@pytest.mark.parametrize("mode", [UP, DOWN])
def test_nonassociativity_witness(mode):
    w = find_nonassociativity(mode, all_dates([2023]))
    assert w is not None
    assert add_seq(mode, w.date, (w.p1, w.p2)) == w.left
    assert add_period(mode, w.date, w.p1 + w.p2) == w.right
    assert w.left != w.right


def test_nonassociativity_known_instance():
    t = Date(2023, 1, 31)
    two_steps = add_seq(DOWN, t, (Period(0, 1, 0), Period(0, 1, 0)))
    assert two_steps == Date(2023, 3, 28)
    assert add_period(DOWN, t, Period(0, 2, 0)) == Date(2023, 3, 31)


def test_strict_monotonicity_counterexample():
    # Mar 30 and Mar 31 both land on Apr 30 under Down + 1 month
    hits = list(loose_monotonicity_witnesses(all_dates([2023]), [1], modes=(DOWN,)))
    assert (DOWN, Date(2023, 3, 30), Date(2023, 3, 31), 1, Date(2023, 4, 30)) in hits


@pytest.mark.parametrize("mode, two_steps", [(DOWN, Date(2023, 5, 30)), (UP, Date(2023, 6, 1))])
def test_associativity_instance_mar31(mode, two_steps):
    t, one = Date(2023, 3, 31), Period(0, 1, 0)
    assert add_seq(mode, t, (one, one)) == two_steps
    assert add_period(mode, t, Period(0, 2, 0)) == Date(2023, 5, 31)
