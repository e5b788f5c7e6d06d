import csv
import io
import json
import sys

import pytest

from datesafe import litmus
from datesafe.core import BOTTOM, Date, Period, RoundingMode, add_period, compare, render, valid
from datesafe.litmus import Kind, builtin_cases, classify, posix_normalize, results_for_mode

UP, DOWN, ABORT = RoundingMode.UP, RoundingMode.DOWN, RoundingMode.ABORT


@pytest.fixture(scope="module")
def cases():
    return builtin_cases()


def _by_id(cases):
    return {c.id: c for c in cases}


def test_anchor_values(cases):
    c = _by_id(cases)
    leap = c["leap-day-plus-2y"].expected
    assert (leap[DOWN], leap[UP], leap[ABORT]) == (Date(2006, 2, 28), Date(2006, 3, 1), BOTTOM)
    mar = c["mar31-plus-1m"].expected
    assert (mar[DOWN], mar[UP]) == (Date(2023, 4, 30), Date(2023, 5, 1))
    jan = c["jan31-plus-1m"].expected
    assert (jan[DOWN], jan[UP]) == (Date(2023, 2, 28), Date(2023, 3, 1))
    assert c["leap-day-plus-216m"].expected[DOWN] == Date(2022, 2, 28)


def test_posix_normalize_signature():
    assert posix_normalize(Date(2023, 1, 31), Period(0, 1, 0)) == Date(2023, 3, 3)
    assert posix_normalize(Date(2023, 3, 31), Period(0, 1, 0)) == Date(2023, 5, 1)
    assert posix_normalize(Date(2024, 1, 31), Period(0, 1, 0)) == Date(2024, 3, 2)
    assert posix_normalize(Date(2023, 6, 15), Period(0, 1, 2)) == Date(2023, 7, 17)


def test_generated_cases(cases):
    gen = [c for c in cases if c.id.startswith("gen-")]
    assert len(gen) == 30
    assert sum(c.ambiguous for c in gen) == 15
    assert len({(c.start, c.period) for c in cases}) == len(cases)


def test_case_invariants(cases):
    for c in cases:
        down, up, ab = (c.expected[r] for r in (DOWN, UP, ABORT))
        assert valid(c.start)
        assert compare(down, up) <= 0
        assert (ab is BOTTOM) == (down != up)


def test_expected_tables_regenerate(cases):
    # expectations are recomputed from date-core every time, never stored
    again = builtin_cases()
    assert [c.to_json() for c in again] == [c.to_json() for c in cases]
    for c in cases:
        for r in (DOWN, UP, ABORT):
            assert c.expected[r] == add_period(r, c.start, c.period)


@pytest.mark.parametrize("mode, kind", [(DOWN, Kind.ROUNDS_DOWN), (UP, Kind.ROUNDS_UP), (ABORT, Kind.ABORTS)])
def test_self_classification(mode, kind):
    assert classify(results_for_mode(mode)).kind is kind


def test_posix_classification(cases):
    res = {c.id: posix_normalize(c.start, c.period) for c in cases}
    assert classify(res).kind is Kind.POSIX_NORMALIZE


def test_posix_needs_signature(cases):
    rest = [c for c in cases if (c.start, c.period) != (Date(2023, 1, 31), Period(0, 1, 0))]
    res = {c.id: posix_normalize(c.start, c.period) for c in rest}
    assert classify(res, rest).kind is Kind.OTHER


def test_mixed_policy_is_other(cases):
    res = results_for_mode(DOWN)
    res["mar31-plus-1m"] = Date(2023, 5, 1)
    out = classify(res)
    assert out.kind is Kind.OTHER and out.detail == "mar31-plus-1m"
    assert str(out) == "Other(mar31-plus-1m)"


def test_wrong_unambiguous_answer_is_other(cases):
    res = results_for_mode(UP)
    plain = next(c for c in cases if not c.ambiguous)
    res[plain.id] = Date(1970, 1, 1)
    assert classify(res).kind is Kind.OTHER


def test_missing_results():
    res = results_for_mode(DOWN)
    del res["jan31-plus-1m"]
    with pytest.raises(KeyError):
        classify(res)


def test_error_strings_accepted():
    res = {k: ("error" if v is BOTTOM else render(v)) for k, v in results_for_mode(ABORT).items()}
    assert classify(res).kind is Kind.ABORTS


def test_export_load_round_trip(cases):
    text = litmus.export_cases()
    doc = json.loads(text)
    assert doc[0] == {
        "id": "leap-day-plus-2y",
        "start": "2004-02-29",
        "period": {"years": 2, "months": 0, "days": 0},
        "expected": {"down": "2006-02-28", "up": "2006-03-01", "abort": "⊥"},
    }
    assert [c.to_json() for c in litmus.load_cases(text)] == [c.to_json() for c in cases]


@pytest.mark.parametrize("mode, kind", [("down", Kind.ROUNDS_DOWN), ("up", Kind.ROUNDS_UP), ("abort", Kind.ABORTS), ("posix", Kind.POSIX_NORMALIZE)])
def test_self_adapter_protocol(mode, kind):
    out = io.StringIO()
    litmus.self_adapter(io.StringIO(litmus.export_cases()), out, mode)
    lines = out.getvalue().splitlines()
    assert len(lines) == len(builtin_cases())
    first = json.loads(lines[0])
    assert set(first) == {"id", "result"}
    assert classify(litmus.parse_results(lines)).kind is kind


def test_parse_results_errors():
    with pytest.raises(ValueError):
        litmus.parse_results(['{"id": "x"}'])
    with pytest.raises(ValueError):
        litmus.parse_results(["not json"])
    assert litmus.parse_results(["", '{"id": "x", "result": "error"}']) == {"x": "error"}


def test_run_adapter_subprocess():
    cmd = [sys.executable, "-m", "datesafe", "litmus", "adapter", "--mode", "up"]
    assert classify(litmus.run_adapter(cmd)).kind is Kind.ROUNDS_UP


def test_run_adapter_foreign_script(tmp_path):
    # an adapter written without datesafe: mktime-like normalization via datetime
    script = tmp_path / "adapter.py"
    script.write_text(
        "import json, sys, datetime\n"
        "for c in json.load(sys.stdin):\n"
        "    y, m, d = map(int, c['start'].split('-'))\n"
        "    p = c['period']\n"
        "    k = (m - 1) + p['months'] + 12 * p['years']\n"
        "    y, m = y + k // 12, k % 12 + 1\n"
        "    t = datetime.date(y, m, 1) + datetime.timedelta(days=d - 1 + p['days'])\n"
        "    print(json.dumps({'id': c['id'], 'result': t.isoformat()}))\n"
    )
    assert classify(litmus.run_adapter([sys.executable, str(script)])).kind is Kind.POSIX_NORMALIZE


def test_table_csv(cases):
    rows = list(csv.reader(io.StringIO(litmus.table_csv())))
    assert rows[0] == ["id", "start", "period", "ambiguous", "down", "up", "abort"]
    assert len(rows) == len(cases) + 1
    assert rows[1][:2] == ["leap-day-plus-2y", "2004-02-29"]
    assert rows[1][3:] == ["yes", "2006-02-28", "2006-03-01", "⊥"]
