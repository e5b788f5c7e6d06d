"""Simultaneous Up/Down abstract evaluation over partitioned YMD states.

Each partition holds one numerical state plus a registry saying, for every
date variable, whether its Up and Down values are known to coincide
(*synced*, one ghost triple) or may differ (*split*, ``u.`` and ``d.``
triples). Variables are split lazily, only when a rounding case of a
period addition survives.

Boolean conditions evaluate to pairs ``(b_up, b_down)`` per refined state.
``sync(e)`` maps a pair to ``(b_u == b_d, b_u == b_d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import lang as L
from . import ymd
from .core import RoundingMode
from .numdom.product import ProductState
from .ymd import LABELS, Handle, Unsupported

__all__ = [
    "Partition",
    "BiState",
    "Verdict",
    "DEFAULT_CAP",
    "Unsupported",
]

DEFAULT_CAP = 64

UP, DOWN = RoundingMode.UP, RoundingMode.DOWN
_ROUNDING = frozenset(v for k, v in LABELS.items() if k != "none")


@dataclass
class Partition:
    state: ProductState
    registry: Dict[str, bool] = field(default_factory=dict)  # var -> split?
    labels: Tuple[str, ...] = ()
    order: Tuple[str, ...] = ()  # date variables in definition order

    def handle(self, var: str, mode: RoundingMode) -> Handle:
        if self.registry.get(var):
            return Handle(var, "u" if mode is UP else "d")
        return Handle(var)

    def handles(self) -> List[Handle]:
        out = []
        for v in self.order:
            if self.registry[v]:
                out += [Handle(v, "u"), Handle(v, "d")]
            else:
                out.append(Handle(v))
        return out

    def split_vars(self) -> List[str]:
        return [v for v in self.order if self.registry[v]]

    def with_state(self, state: ProductState, labels: Sequence[str] = ()) -> "Partition":
        return Partition(state, self.registry, self.labels + tuple(labels), self.order)


@dataclass
class Verdict:
    proven: bool
    desyncs: List[Partition] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.proven


def _rounding_free(labels: Iterable[str]) -> bool:
    return not any(lab in _ROUNDING for lab in labels)


def _has_addition(e) -> bool:
    if isinstance(e, L.AddPeriod):
        return True
    if isinstance(e, (L.FirstDayOf, L.LastDayOf)):
        return _has_addition(e.expr)
    return False


def _date_vars(e) -> List[str]:
    return L.free_vars(e)


_Eval = Tuple[Tuple[str, ...], ProductState, Handle]


class BiState:
    """A list of partitions, evaluated statement by statement."""

    def __init__(self, cap: Optional[int] = DEFAULT_CAP, year_range: Optional[Tuple[int, int]] = None):
        self.cap = cap
        self.year_range = year_range
        self.partitions: List[Partition] = [Partition(ProductState.top())]
        self.max_partitions = 1
        self._tmp = count()
        self._random: Dict[int, str] = {}

    # --- helpers -------------------------------------------------------------

    def _temp(self, tag: Optional[str] = None) -> Handle:
        return Handle(f"$t{next(self._tmp)}", tag)

    def _prepare_random(self, node) -> None:
        """Register one synced triple per ``random_date()`` inside ``node``."""
        self._random = {}
        for sub in L._date_exprs(node):
            if isinstance(sub, L.RandomDate):
                h = self._temp()
                self._random[id(sub)] = h.var
                self.partitions = [p.with_state(ymd.mk_random_date(p.state, h, self.year_range)) for p in self.partitions]

    def _cleanup(self) -> None:
        out = []
        for p in self.partitions:
            temps = [v for v in p.state.vars if "#$t" in v or v.startswith("$")]
            st = p.state.remove(temps) if temps else p.state
            if not st.is_bottom():
                out.append(p.with_state(st))
        self.partitions = out
        self._random = {}

    def _eval(self, p: Partition, st: ProductState, e, mode: RoundingMode, dst: Optional[Handle]) -> List[_Eval]:
        """Single-mode evaluation of a date expression to a handle."""
        if isinstance(e, L.Var):
            h = p.handle(e.name, mode)
            if dst is None:
                return [((), st, h)]
            return [((), ymd.copy_date(st, h, dst), dst)]
        if isinstance(e, L.RandomDate):
            h = Handle(self._random[id(e)])
            if dst is None:
                return [((), st, h)]
            return [((), ymd.copy_date(st, h, dst), dst)]
        if isinstance(e, L.Literal):
            h = dst or self._temp()
            return [((), ymd.mk_const_date(st, h, e.value), h)]
        out: List[_Eval] = []
        for labels, s1, src in self._eval(p, st, e.expr, mode, None):
            h = dst or self._temp()
            if isinstance(e, L.AddPeriod):
                cases = ymd.add_period_abs(mode, s1, src, e.period, h)
                out += [(labels + (c.label,), c.state, h) for c in cases]
            elif isinstance(e, L.FirstDayOf):
                s2 = ymd.first_day_of(s1, src, h)
                if not s2.is_bottom():
                    out.append((labels, s2, h))
            elif isinstance(e, L.LastDayOf):
                cases = ymd.last_day_of(s1, src, h)
                out += [(labels + (c.label,), c.state, h) for c in cases]
            else:
                raise TypeError(e)
        return [x for x in out if not x[1].is_bottom()]

    def _eval_pair(self, p: Partition, st: ProductState, e, dst: Optional[str]):
        """Both-mode evaluation: ``(labels, state, up_handle, down_handle)``.

        Equal handles mean the two values coincide. With synced sources the
        rounding-free outcomes are computed once and shared; the remaining
        pairs keep at least one rounding case.
        """
        synced = all(not p.registry.get(v) for v in _date_vars(e))
        if synced and not _has_addition(e):
            h = Handle(dst) if dst else None
            return [(lab, s, r, r) for lab, s, r in self._eval(p, st, e, UP, h)]
        out = []
        if synced:
            h = Handle(dst) if dst else None
            for lab, s, r in self._eval(p, st, e, UP, h):
                if _rounding_free(lab):
                    out.append((lab, s, r, r))
        hu = Handle(dst, "u") if dst else None
        hd = Handle(dst, "d") if dst else None
        for lu, su, ru in self._eval(p, st, e, UP, hu):
            for ld, sd, rd in self._eval(p, su, e, DOWN, hd):
                if synced and _rounding_free(lu) and _rounding_free(ld):
                    continue
                out.append((lu + ld, sd, ru, rd))
        return out

    # --- statements ----------------------------------------------------------

    def assign_date(self, name: str, e) -> None:
        self._prepare_random(e)
        out = []
        for p in self.partitions:
            if name in p.registry:
                raise ValueError(f"date {name!r} is already defined")
            for labels, st, ru, rd in self._eval_pair(p, p.state, e, name):
                st = ymd.strengthen_all(st)
                if st.is_bottom():
                    continue
                reg = dict(p.registry)
                reg[name] = ru != rd
                out.append(Partition(st, reg, p.labels + labels, p.order + (name,)))
        self.partitions = out
        self._cleanup()
        self._prune()
        self.enforce_cap()

    def _atom(self, p: Partition, st: ProductState, c) -> List[Tuple[ProductState, Tuple[bool, bool]]]:
        out = []
        if isinstance(c, L.AccessorCmp):
            for _, s1, ru, rd in self._eval_pair(p, st, c.expr, None):
                if ru == rd:
                    out += [(x.state, (x.value, x.value)) for x in ymd.accessor_cmp(s1, ru, c.accessor, c.op, c.value)]
                    continue
                for xu in ymd.accessor_cmp(s1, ru, c.accessor, c.op, c.value):
                    for xd in ymd.accessor_cmp(xu.state, rd, c.accessor, c.op, c.value):
                        out.append((xd.state, (xu.value, xd.value)))
            return out
        for _, s1, lu, ld in self._eval_pair(p, st, c.left, None):
            for _, s2, ru, rd in self._eval_pair(p, s1, c.right, None):
                if lu == ld and ru == rd:
                    out += [(x.state, (x.value, x.value)) for x in ymd.dates_cmp(c.op, s2, lu, ru)]
                    continue
                for xu in ymd.dates_cmp(c.op, s2, lu, ru):
                    for xd in ymd.dates_cmp(c.op, xu.state, ld, rd):
                        out.append((xd.state, (xu.value, xd.value)))
        return out

    def _bool(self, p: Partition, st: ProductState, e) -> List[Tuple[ProductState, Tuple[bool, bool]]]:
        if isinstance(e, (L.Cmp, L.AccessorCmp)):
            return self._atom(p, st, e)
        if isinstance(e, L.Sync):
            return [(s, (bu == bd, bu == bd)) for s, (bu, bd) in self._bool(p, st, e.expr)]
        if isinstance(e, L.Not):
            return [(s, (not bu, not bd)) for s, (bu, bd) in self._bool(p, st, e.expr)]
        if isinstance(e, (L.And, L.Or)):
            out = []
            for s1, (lu, ld) in self._bool(p, st, e.left):
                for s2, (ru, rd) in self._bool(p, s1, e.right):
                    if isinstance(e, L.And):
                        out.append((s2, (lu and ru, ld and rd)))
                    else:
                        out.append((s2, (lu or ru, ld or rd)))
            return out
        raise TypeError(e)

    def eval_bool(self, e) -> List[Tuple[Partition, Tuple[bool, bool]]]:
        """Refined partitions of the current state with the value pair of ``e``."""
        self._prepare_random(e)
        out = []
        for p in self.partitions:
            for st, pair in self._bool(p, p.state, e):
                if not st.is_bottom():
                    out.append((p.with_state(st), pair))
        return out

    def assume(self, e) -> None:
        """Keep the states where ``e`` holds in both modes.

        The comparison cases of one partition are joined back together, so
        an assume never multiplies the number of partitions.
        """
        self._prepare_random(e)
        kept = []
        for p in self.partitions:
            st = None
            for s, pair in self._bool(p, p.state, e):
                if pair == (True, True) and not s.is_bottom():
                    st = s if st is None else st.join(s)
            if st is not None:
                kept.append(p.with_state(ymd.strengthen_all(st)))
        self.partitions = kept
        self._cleanup()
        self._prune()
        self.enforce_cap()

    def check(self, e) -> Verdict:
        """Verdict for ``assert(e)``; the state itself is left unchanged."""
        saved = self.partitions
        if isinstance(e, L.Sync) and isinstance(e.expr, (L.Cmp, L.AccessorCmp)):
            self._prepare_random(e)
            bad = [p.with_state(st) for p in self.partitions for st in self._desyncs(p, e.expr)]
        else:
            bad = [p for p, pair in self.eval_bool(e) if pair != (True, True)]
        self.partitions = saved
        self._random = {}
        return Verdict(not bad, bad)

    def _desyncs(self, p: Partition, c) -> List[ProductState]:
        """States of ``p`` where the comparison ``c`` differs between modes.

        Same refinements as :meth:`eval_bool` restricted to the unequal
        pairs: Down cases are only built for the boolean Up did not take.
        """
        out = []
        if isinstance(c, L.AccessorCmp):
            for _, s1, ru, rd in self._eval_pair(p, p.state, c.expr, None):
                if ru == rd:
                    continue
                for xu in ymd.accessor_cmp(s1, ru, c.accessor, c.op, c.value):
                    out += [x.state for x in ymd.accessor_cmp(xu.state, rd, c.accessor, c.op, c.value, only=not xu.value)]
            return [s for s in out if not s.is_bottom()]
        for _, s1, lu, ld in self._eval_pair(p, p.state, c.left, None):
            for _, s2, ru, rd in self._eval_pair(p, s1, c.right, None):
                if lu == ld and ru == rd:
                    continue
                for xu in ymd.dates_cmp(c.op, s2, lu, ru):
                    out += [x.state for x in ymd.dates_cmp(c.op, xu.state, ld, rd, only=not xu.value)]
        return [s for s in out if not s.is_bottom()]

    # --- partition cap -------------------------------------------------------

    def _prune(self) -> None:
        """Drop partitions contained in another one with the same registry."""
        ps = self.partitions
        if len(ps) < 2:
            return
        keep = []
        for i, p in enumerate(ps):
            for j, q in enumerate(ps):
                if i == j or p.registry != q.registry or not p.state.leq(q.state):
                    continue
                # of two equal states keep the first one
                if j < i or not q.state.leq(p.state):
                    break
            else:
                keep.append(p)
        self.partitions = keep

    def enforce_cap(self) -> None:
        self.max_partitions = max(self.max_partitions, len(self.partitions))
        if self.cap is None:
            return
        while len(self.partitions) > self.cap:
            i, j = self._cheapest_pair()
            a, b = self.partitions[i], self.partitions[j]
            a, b = _unify(a, b)
            joined = Partition(a.state.join(b.state), a.registry, a.labels, a.order)
            rest = [p for k, p in enumerate(self.partitions) if k not in (i, j)]
            self.partitions = rest + [joined]

    def _cheapest_pair(self) -> Tuple[int, int]:
        """Same registry first, then the fewest constants lost by the join."""
        sigs = [frozenset(p.state.constants().items()) for p in self.partitions]
        regs = [tuple(sorted(p.registry.items())) for p in self.partitions]
        best, cost = (0, 1), None
        for i in range(len(self.partitions)):
            for j in range(i + 1, len(self.partitions)):
                key = (regs[i] != regs[j], len(sigs[i] ^ sigs[j]))
                if cost is None or key < cost:
                    best, cost = (i, j), key
                    if key == (False, 0):
                        return best
        return best


def _split(p: Partition, var: str) -> Partition:
    st = p.state
    h = Handle(var)
    for tag in ("u", "d"):
        st = ymd.copy_date(st, h, Handle(var, tag))
    st = st.remove(h.names)
    reg = dict(p.registry)
    reg[var] = True
    return Partition(st, reg, p.labels, p.order)


def _unify(a: Partition, b: Partition) -> Tuple[Partition, Partition]:
    for v in a.order:
        if a.registry[v] and not b.registry[v]:
            b = _split(b, v)
        elif b.registry[v] and not a.registry[v]:
            a = _split(a, v)
    return a, b
