"""Litmus cases for telling rounding policies apart.

A case is a start date and a period. The expected results under each
rounding mode come from :mod:`datesafe.core`. An implementation under test
produces one result per case, and :func:`classify` names the policy those
results are consistent with.

Foreign implementations are driven through a small line protocol: the
adapter reads the case list (JSON, from :func:`export_cases`) on stdin and
prints one ``{"id": ..., "result": "YYYY-MM-DD" | "error"}`` object per
line. :func:`self_adapter` is the reference adapter built on date-core.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import subprocess
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Union

from .core import (
    BOTTOM,
    Bottom,
    Date,
    DateValue,
    Period,
    RoundingMode,
    add_days,
    add_months,
    add_period,
    add_years,
    is_ambiguous,
    nb_days,
    parse_iso,
    render,
    valid,
)

__all__ = [
    "LitmusCase",
    "Kind",
    "Classification",
    "builtin_cases",
    "posix_normalize",
    "results_for_mode",
    "classify",
    "export_cases",
    "load_cases",
    "parse_results",
    "self_adapter",
    "run_adapter",
    "table_csv",
    "MODES",
]

MODES = (RoundingMode.DOWN, RoundingMode.UP, RoundingMode.ABORT)

Result = Union[Date, str]  # a date, or "error"
ERROR = "error"


@dataclass(frozen=True)
class LitmusCase:
    id: str
    start: Date
    period: Period
    expected: Mapping[RoundingMode, DateValue]

    @property
    def ambiguous(self) -> bool:
        return isinstance(self.expected[RoundingMode.ABORT], Bottom)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "start": render(self.start),
            "period": {"years": self.period.years, "months": self.period.months, "days": self.period.days},
            "expected": {r.value: render(self.expected[r]) for r in MODES},
        }


def _case(cid: str, start: Date, period: Period) -> LitmusCase:
    return LitmusCase(cid, start, period, {r: add_period(r, start, period) for r in MODES})


def posix_normalize(start: Date, period: Period) -> Date:
    """``mktime``-style addition: add the fields, then let the day overflow.

    The adjusted day is counted from the first of the adjusted month, so
    2023-02-31 becomes 2023-03-03.
    """
    t = add_months(add_years(start, period.years), period.months)
    first = Date(t.year, t.month, 1)
    return add_days(first, t.day - 1 + period.days)


# (id, start, period) for the hand-picked cases; expectations are computed
_ANCHORS = [
    ("leap-day-plus-2y", Date(2004, 2, 29), Period(2, 0, 0)),
    ("mar31-plus-1m", Date(2023, 3, 31), Period(0, 1, 0)),
    ("jan31-plus-1m", Date(2023, 1, 31), Period(0, 1, 0)),
    ("leap-day-plus-216m", Date(2004, 2, 29), Period(0, 216, 0)),
]

_GEN_YEARS = (2023, 2024, 1900, 2000)
_GEN_DAYS = (28, 29, 30, 31)
_GEN_PERIODS = (
    Period(0, 1, 0),
    Period(0, -1, 0),
    Period(0, 3, 0),
    Period(0, 13, 0),
    Period(1, 0, 0),
    Period(4, 0, 0),
    Period(-1, 0, 0),
    Period(0, 1, 1),
)
GENERATED = 30


def _generated() -> List[LitmusCase]:
    """Alternate ambiguous and unambiguous cases from a fixed enumeration."""
    amb: List[LitmusCase] = []
    plain: List[LitmusCase] = []
    seen = {(start, period) for _, start, period in _ANCHORS}
    for y in _GEN_YEARS:
        for m in range(1, 13):
            for d in _GEN_DAYS:
                start = Date(y, m, d)
                if not valid(start):
                    continue
                for period in _GEN_PERIODS:
                    if (start, period) in seen:
                        continue
                    seen.add((start, period))
                    (amb if is_ambiguous(start, period) else plain).append((start, period))
    # spread the picks over the enumeration instead of taking a prefix
    half = GENERATED // 2
    picks = [amb[i * len(amb) // half] for i in range(half)] + [plain[i * len(plain) // half] for i in range(half)]
    return [_case(f"gen-{i:02d}", start, period) for i, (start, period) in enumerate(picks)]


def builtin_cases() -> List[LitmusCase]:
    return [_case(cid, start, period) for cid, start, period in _ANCHORS] + _generated()


# --- classification --------------------------------------------------------


class Kind(enum.Enum):
    ROUNDS_DOWN = "RoundsDown"
    ROUNDS_UP = "RoundsUp"
    ABORTS = "Aborts"
    POSIX_NORMALIZE = "PosixNormalize"
    OTHER = "Other"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    detail: Optional[str] = None

    def __str__(self) -> str:
        return self.kind.value if self.detail is None else f"{self.kind.value}({self.detail})"


def _as_result(v: Union[DateValue, str]) -> Result:
    if isinstance(v, Bottom) or v == ERROR:
        return ERROR
    if isinstance(v, str):
        return parse_iso(v)
    return v


def _expected(case: LitmusCase, kind: Kind) -> Result:
    if kind is Kind.POSIX_NORMALIZE:
        return posix_normalize(case.start, case.period)
    mode = {Kind.ROUNDS_DOWN: RoundingMode.DOWN, Kind.ROUNDS_UP: RoundingMode.UP, Kind.ABORTS: RoundingMode.ABORT}[kind]
    return _as_result(case.expected[mode])


_SIGNATURE = (Date(2023, 1, 31), Period(0, 1, 0))


def classify(results: Mapping[str, Union[DateValue, str]], cases: Optional[Sequence[LitmusCase]] = None) -> Classification:
    """Name the policy that explains every ambiguous result.

    Unambiguous cases have one correct answer; getting one wrong is
    reported as :attr:`Kind.OTHER`. A PosixNormalize verdict needs the
    January 31 signature case in ``cases``.
    """
    cases = list(cases) if cases is not None else builtin_cases()
    missing = [c.id for c in cases if c.id not in results]
    if missing:
        raise KeyError(f"missing results for: {', '.join(missing)}")
    got = {c.id: _as_result(results[c.id]) for c in cases}
    for c in cases:
        if not c.ambiguous and got[c.id] != _as_result(c.expected[RoundingMode.DOWN]):
            return Classification(Kind.OTHER, f"unambiguous case {c.id}")
    amb = [c for c in cases if c.ambiguous]
    order = [Kind.ROUNDS_DOWN, Kind.ROUNDS_UP, Kind.ABORTS]
    if any((c.start, c.period) == _SIGNATURE for c in amb):
        order.append(Kind.POSIX_NORMALIZE)
    for kind in order:
        if all(got[c.id] == _expected(c, kind) for c in amb):
            return Classification(kind)
    # no policy fits: report where the closest one first breaks
    best = max(order, key=lambda k: sum(got[c.id] == _expected(c, k) for c in amb))
    first = next(c for c in amb if got[c.id] != _expected(c, best))
    return Classification(Kind.OTHER, first.id)


def results_for_mode(mode: RoundingMode, cases: Optional[Sequence[LitmusCase]] = None) -> Dict[str, DateValue]:
    cases = cases if cases is not None else builtin_cases()
    return {c.id: add_period(mode, c.start, c.period) for c in cases}


# --- adapter protocol ------------------------------------------------------


def export_cases(cases: Optional[Sequence[LitmusCase]] = None) -> str:
    cases = cases if cases is not None else builtin_cases()
    return json.dumps([c.to_json() for c in cases], indent=2, ensure_ascii=False) + "\n"


def load_cases(text: str) -> List[LitmusCase]:
    out = []
    for item in json.loads(text):
        p = item["period"]
        out.append(_case(item["id"], parse_iso(item["start"]), Period(p.get("years", 0), p.get("months", 0), p.get("days", 0))))
    return out


def parse_results(lines: Iterable[str]) -> Dict[str, Result]:
    """Read adapter output: one JSON object per non-blank line."""
    out: Dict[str, Result] = {}
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            item = json.loads(line)
            out[item["id"]] = _as_result(item["result"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"line {n}: bad result record {line!r}") from exc
    return out


def _result_text(v: Union[DateValue, str]) -> str:
    v = _as_result(v)
    return ERROR if v == ERROR else render(v)


def self_adapter(stdin: TextIO, stdout: TextIO, mode: str = "down") -> None:
    """Reference adapter: date-core under ``mode`` (or ``posix``)."""
    for c in load_cases(stdin.read()):
        if mode == "posix":
            v: DateValue = posix_normalize(c.start, c.period)
        else:
            v = add_period(RoundingMode(mode), c.start, c.period)
        stdout.write(json.dumps({"id": c.id, "result": _result_text(v)}) + "\n")


def run_adapter(command: Sequence[str], cases: Optional[Sequence[LitmusCase]] = None, timeout: float = 60.0) -> Dict[str, Result]:
    """Feed the case list to an adapter process and collect its answers."""
    proc = subprocess.run(list(command), input=export_cases(cases), capture_output=True, text=True, timeout=timeout, check=True)
    return parse_results(proc.stdout.splitlines())


def table_csv(cases: Optional[Sequence[LitmusCase]] = None) -> str:
    """One row per case, one column per rounding mode."""
    cases = cases if cases is not None else builtin_cases()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "start", "period", "ambiguous"] + [r.value for r in MODES])
    for c in cases:
        w.writerow([c.id, render(c.start), str(c.period), "yes" if c.ambiguous else "no"] + [render(c.expected[r]) for r in MODES])
    return buf.getvalue()
