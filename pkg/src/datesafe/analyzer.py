"""Front end of the rounding-insensitivity analysis: verdicts and hints.

For every assert the analysis reports *proven* or *unproven*. An unproven
sync comes with hints read off one desynchronizing partition: meaningful
intervals of the ghost variables, congruences, and chains of equalities
between the remaining year/month/day variables.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import lang as L
from .bidates import DEFAULT_CAP, BiState, Partition, Unsupported
from .numdom.product import INF, ProductState
from .ymd import Handle

__all__ = [
    "Hint",
    "AssertReport",
    "AnalysisReport",
    "AnalysisError",
    "analyze",
    "analyze_program",
    "select_hint_partition",
    "extract_hints",
    "render_report",
    "ghost_label",
]

WIDTH = 88

_ACCESSOR = {"y": "year", "m": "month", "d": "day"}
_COMP_ORDER = {"m": 0, "d": 1, "y": 2}
_FULL = {"d": (1, 31), "m": (1, 12)}


class AnalysisError(Exception):
    """Unsupported construct, with the location of the offending statement."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Hint:
    kind: str  # interval, congruence, chain
    var: str  # ghost variable (for chains: the first member)
    payload: Tuple

    def as_json(self, unicode: bool = False) -> Dict:
        if self.kind == "interval":
            lo, hi = self.payload
            body = {"lo": lo, "hi": hi}
        elif self.kind == "congruence":
            body = {"modulus": self.payload[0], "residue": self.payload[1]}
        else:
            body = {"members": [{"var": ghost_label(v, unicode), "offset": k} for v, k in self.payload]}
        return {"kind": self.kind, "var": ghost_label(self.var, unicode), "payload": body}


@dataclass
class AssertReport:
    index: int
    loc: L.Loc
    expr: str
    proven: bool
    sync: bool
    caret: Tuple[int, int]  # 1-based columns, end exclusive
    hints: List[Hint] = field(default_factory=list)
    partition: Optional[Partition] = None
    desyncs: int = 0

    @property
    def verdict(self) -> str:
        return "proven" if self.proven else "unproven"


@dataclass
class AnalysisReport:
    file: str
    source_lines: List[str]
    asserts: List[AssertReport]
    partitions_max: int
    millis: int

    @property
    def exit_code(self) -> int:
        return 0 if all(a.proven for a in self.asserts) else 1


# --- ghost names --------------------------------------------------------------


def _split_ghost(name: str) -> Tuple[Optional[str], str, str]:
    tag = None
    if name[:2] in ("u.", "d.") and "#" in name:
        tag, name = name[0], name[2:]
    comp, _, var = name.partition("#")
    return tag, comp, var


def ghost_label(name: str, unicode: bool = False) -> str:
    """Display form: ``u.year(limit)``, or ``↑year(limit)`` in unicode mode."""
    tag, comp, var = _split_ghost(name)
    prefix = ""
    if tag:
        prefix = {"u": "↑", "d": "↓"}[tag] if unicode else f"{tag}."
    return f"{prefix}{_ACCESSOR[comp]}({var})"


# --- hint selection and extraction ----------------------------------------------


def _singleton_dm(p: Partition) -> int:
    n = 0
    for h in p.handles():
        for v in (h.day, h.month):
            if p.state.constant(v) is not None:
                n += 1
    return n


def select_hint_partition(desyncs: Sequence[Partition]) -> Partition:
    """Most split variables, then most constant day/month ghosts; first wins ties."""
    if not desyncs:
        raise ValueError("no desynchronized partition")
    return max(desyncs, key=lambda p: (len(p.split_vars()), _singleton_dm(p)))


def _meaningful(name: str, lo, hi, year_range) -> bool:
    comp = _split_ghost(name)[1]
    if comp in _FULL:
        flo, fhi = _FULL[comp]
        return flo <= lo and hi <= fhi and (lo, hi) != (flo, fhi)
    if lo == -INF or hi == INF:
        return False
    if year_range is None:
        return True
    return (lo, hi) != tuple(year_range)


def _ordered_ghosts(p: Partition) -> List[str]:
    """Ghosts by variable in reverse definition order; month, day, year; Up first."""
    out = []
    for var in reversed(p.order):
        tags = ("u", "d") if p.registry[var] else (None,)
        for tag in tags:
            h = Handle(var, tag)
            out += [h.month, h.day, h.year]
    return out


def _member_key(p: Partition, name: str) -> Tuple:
    tag, comp, var = _split_ghost(name)
    rank = {None: 0, "u": 1, "d": 2}[tag]
    return (rank, p.order.index(var), _COMP_ORDER[comp])


def _chains(p: Partition, names: List[str]) -> List[List[Tuple[str, int]]]:
    """Classes of ``names`` related by ``x = y + c``; offsets relative to the base."""
    if len(names) < 2:
        return []
    proj = p.state.project(names)
    parent = {v: v for v in names}
    offset = {v: 0 for v in names}  # v = parent + offset

    def find(v):
        if parent[v] == v:
            return v, 0
        r, k = find(parent[v])
        parent[v], offset[v] = r, offset[v] + k
        return r, offset[v]

    for t, b in proj.eqs.items():
        if len(t) != 2:
            continue
        (x, a), (y, c) = t
        if (a, c) != (1, -1):
            continue
        # x - y = b
        rx, kx = find(x)
        ry, ky = find(y)
        if rx != ry:
            parent[rx] = ry
            offset[rx] = b + ky - kx
    classes: Dict[str, List[Tuple[str, int]]] = {}
    for v in names:
        r, k = find(v)
        classes.setdefault(r, []).append((v, k))
    out = []
    for members in classes.values():
        if len(members) < 2:
            continue
        low = min(k for _, k in members)
        members = [(v, k - low) for v, k in members]
        members.sort(key=lambda m: (-m[1], _member_key(p, m[0])))
        out.append(members)
    out.sort(key=lambda ms: min(_member_key(p, v) for v, _ in ms))
    return out


def extract_hints(p: Partition, year_range: Optional[Tuple[int, int]] = None) -> List[Hint]:
    st = p.state
    ghosts = _ordered_ghosts(p)
    intervals, rest = [], []
    for g in ghosts:
        lo, hi = st.interval_of(g)
        if _meaningful(g, lo, hi, year_range):
            intervals.append(Hint("interval", g, (lo, hi)))
        else:
            rest.append(g)
    chains = _chains(p, rest)
    chained = {v for ms in chains for v, _ in ms}
    bases = {ms[-1][0] for ms in chains}
    congs = []
    for g in rest:
        if g in chained and g not in bases:
            continue
        m, c = st.cong_of(g)
        if m > 1:
            congs.append(Hint("congruence", g, (m, c)))
    chain_hints = [Hint("chain", ms[0][0], tuple(ms)) for ms in chains]
    return intervals + congs + chain_hints


# --- analysis -----------------------------------------------------------------


def _first_sync(e) -> Optional[L.Sync]:
    if isinstance(e, L.Sync):
        return e
    if isinstance(e, L.Not):
        return _first_sync(e.expr)
    if isinstance(e, (L.And, L.Or)):
        return _first_sync(e.left) or _first_sync(e.right)
    return None


def _unsupported_loc(stmt) -> L.Loc:
    body = stmt.expr if isinstance(stmt, L.DateDecl) else stmt.cond
    for sub in L._date_exprs(body):
        if isinstance(sub, L.AddPeriod) and sub.period.days:
            return sub.loc
    return stmt.loc


def analyze_program(
    program: L.Program,
    file: str = "<input>",
    max_partitions: Optional[int] = DEFAULT_CAP,
    year_range: Optional[Tuple[int, int]] = None,
) -> AnalysisReport:
    start = time.perf_counter()
    bi = BiState(cap=max_partitions, year_range=year_range)
    reports: List[AssertReport] = []
    for i, stmt in enumerate(program):
        try:
            if isinstance(stmt, L.DateDecl):
                bi.assign_date(stmt.name, stmt.expr)
            elif isinstance(stmt, L.Assume):
                bi.assume(stmt.cond)
            else:
                verdict = bi.check(stmt.cond)
                sync = _first_sync(stmt.cond)
                target = sync.expr if sync is not None else stmt.cond
                rep = AssertReport(
                    index=i,
                    loc=stmt.loc,
                    expr=L.render_bool_expr(target),
                    proven=verdict.proven,
                    sync=sync is not None,
                    caret=(target.loc.col, target.loc.end_col if target.loc.end_line == target.loc.line else 0),
                    desyncs=len(verdict.desyncs),
                )
                if not verdict.proven:
                    rep.partition = select_hint_partition(verdict.desyncs)
                    rep.hints = extract_hints(rep.partition, year_range)
                reports.append(rep)
        except Unsupported as exc:
            loc = _unsupported_loc(stmt)
            raise AnalysisError(str(exc), loc.line, loc.col) from None
    millis = int(round((time.perf_counter() - start) * 1000))
    return AnalysisReport(file, program.source.splitlines(), reports, bi.max_partitions, millis)


def analyze(path: str, **kwargs) -> AnalysisReport:
    with open(path, encoding="utf-8") as fh:
        source = fh.read()
    return analyze_program(L.parse(source), file=path, **kwargs)


# --- rendering ----------------------------------------------------------------


def _num(x) -> str:
    return "+oo" if x == INF else "-oo" if x == -INF else str(x)


def _hint_pieces(h: Hint, unicode: bool) -> List[str]:
    """Text pieces of one hint; a chain may be broken before each ``=``."""
    if h.kind == "interval":
        lo, hi = h.payload
        val = str(lo) if lo == hi else f"[{_num(lo)},{_num(hi)}]"
        return [f"{ghost_label(h.var, unicode)} = {val}"]
    if h.kind == "congruence":
        m, c = h.payload
        return [f"{ghost_label(h.var, unicode)} =[{m}] {c}"]
    pieces = []
    for j, (v, k) in enumerate(h.payload):
        term = ghost_label(v, unicode)
        top = h.payload[0][1]
        if top - k:
            term = f"{term} + {top - k}"
        pieces.append(term if j == 0 else f"= {term}")
    return pieces


def _hint_groups(hints: List[Hint], unicode: bool) -> List[List[str]]:
    """Hints grouped per (variable, mode); each group stays on one line."""
    groups: List[List[str]] = []
    key = None
    for idx, h in enumerate(hints):
        last = idx == len(hints) - 1
        pieces = _hint_pieces(h, unicode)
        if not last:
            pieces[-1] += ","
        if h.kind == "chain":
            groups.extend([p] for p in pieces)
            key = None
            continue
        tag, _, var = _split_ghost(h.var)
        k = (h.kind, tag, var) if h.kind == "interval" else None
        if k is not None and k == key:
            groups[-1].append(pieces[0])
        else:
            groups.append(pieces)
        key = k
    return groups


def _wrap(groups: List[List[str]], width: int = WIDTH) -> List[str]:
    lines: List[str] = []
    cur = ""
    for g in groups:
        text = " ".join(g)
        if cur and len(cur) + 1 + len(text) > width:
            lines.append(cur)
            cur = text
        else:
            cur = f"{cur} {text}" if cur else text
    if cur:
        lines.append(cur)
    return lines


def _render_text(rep: AnalysisReport, unicode: bool) -> str:
    out: List[str] = []
    for a in rep.asserts:
        if a.proven:
            out.append(f"{a.loc.line}: assertion proven: ({a.expr})")
            continue
        src = rep.source_lines[a.loc.line - 1] if a.loc.line <= len(rep.source_lines) else ""
        prefix = f"{a.loc.line}: "
        out.append(prefix + src)
        start, end = a.caret
        if end <= start:
            end = len(src) + 1
        out.append(" " * (len(prefix) + start - 1) + "^" * max(1, end - start))
        head = "Desynchronization detected" if a.sync else "Assertion not proven"
        out.append(f"{head}: ({a.expr}). Hints:")
        out.extend(_wrap(_hint_groups(a.hints, unicode)))
    return "\n".join(out) + "\n"


def _render_json(rep: AnalysisReport, unicode: bool) -> str:
    doc = {
        "file": rep.file,
        "asserts": [
            {
                "line": a.loc.line,
                "col": a.caret[0],
                "expr": a.expr,
                "verdict": a.verdict,
                "hints": [h.as_json(unicode) for h in a.hints],
            }
            for a in rep.asserts
        ],
        "stats": {"partitions_max": rep.partitions_max, "millis": rep.millis},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render_report(rep: AnalysisReport, format: str = "text", unicode: bool = False) -> str:
    if format == "text":
        return _render_text(rep, unicode)
    if format == "json":
        return _render_json(rep, unicode)
    raise ValueError(f"unknown format {format!r}")
