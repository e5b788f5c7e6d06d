"""Random straight-line programs and the concrete checks run against them.

Programs declare up to six dates, perform at most three period additions
(years and months only) and end with one or two ``assert(sync(...))``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import lang as L
from .bidates import Partition
from .core import Date, nb_days, render, valid
from .interp import DEFAULT_YEAR_RANGE, DateSampler, DoubleRunResult, _accessor_bounds, compare_op, run_double
from .ymd import Handle, gamma_member

__all__ = [
    "random_program",
    "covers",
    "first_uncovered",
    "first_sync_failure",
    "DoubleRunner",
    "FuzzConfig",
    "Campaign",
    "campaign",
]

_OPS = ("<", "<=", ">", ">=", "==", "!=")


@dataclass(frozen=True)
class FuzzConfig:
    max_vars: int = 6
    max_additions: int = 3
    literal_years: tuple = (1998, 2026)


def _lit(rng: random.Random, cfg: FuzzConfig) -> str:
    while True:
        y = rng.randint(*cfg.literal_years)
        m = rng.randint(1, 12)
        d = rng.choice((1, 15, 28, 29, 30, 31, rng.randint(1, 31)))
        t = Date(y, m, d)
        if valid(t):
            return render(t)


def _period(rng: random.Random) -> str:
    kind = rng.random()
    if kind < 0.45:
        return f"[0 years, {rng.randint(-25, 25)} months, 0 days]"
    if kind < 0.75:
        return f"[{rng.randint(-4, 4)} years, 0 months, 0 days]"
    return f"[{rng.randint(-2, 2)} years, {rng.randint(-13, 13)} months, 0 days]"


def random_program(rng: random.Random, cfg: FuzzConfig = FuzzConfig()) -> str:
    """Source text of a random well-formed program."""
    names: List[str] = []
    lines: List[str] = []
    additions = 0
    n = rng.randint(2, cfg.max_vars)
    for i in range(n):
        name = f"v{i}"
        choice = rng.random()
        if not names or choice < 0.25:
            expr = "random_date()"
        elif choice < 0.35:
            expr = _lit(rng, cfg)
        elif choice < 0.75 and additions < cfg.max_additions:
            additions += 1
            expr = f"{rng.choice(names)} + {_period(rng)}"
            if rng.random() < 0.15:
                expr = f"first_day_of({expr})"
        elif choice < 0.88:
            expr = f"first_day_of({rng.choice(names)})"
        else:
            expr = f"last_day_of({rng.choice(names)})"
        lines.append(f"date {name} = {expr};")
        names.append(name)
        if rng.random() < 0.25:
            lines.append(f"assume({_condition(rng, names, cfg)});")
    for _ in range(rng.randint(1, 2)):
        a = rng.choice(names)
        b = rng.choice(names + [_lit(rng, cfg)])
        left = a
        if additions < cfg.max_additions and rng.random() < 0.2:
            additions += 1
            left = f"{a} + {_period(rng)}"
        lines.append(f"assert(sync({left} {rng.choice(_OPS)} {b}));")
    return "\n".join(lines) + "\n"


def _condition(rng: random.Random, names: List[str], cfg: FuzzConfig) -> str:
    v = rng.choice(names)
    r = rng.random()
    if r < 0.4:
        k = rng.randint(1, 31)
        return f"day_of({v}) {rng.choice(('<=', '>=', '==', '!=', '<', '>'))} {k}"
    if r < 0.7:
        k = rng.randint(1, 12)
        return f"month_of({v}) {rng.choice(('<=', '>=', '==', '!='))} {k}"
    if r < 0.8:
        k = rng.randint(*cfg.literal_years)
        return f"year_of({v}) {rng.choice(('<=', '>='))} {k}"
    w = rng.choice(names + [_lit(rng, cfg)])
    return f"{v} {rng.choice(_OPS)} {w}"


def _env_of(p: Partition, run: DoubleRunResult) -> Optional[Dict[Handle, Date]]:
    env: Dict[Handle, Date] = {}
    for v in p.order:
        up, down = run.env_up[v], run.env_down[v]
        if p.registry[v]:
            env[Handle(v, "u")] = up
            env[Handle(v, "d")] = down
        else:
            if up != down:
                return None
            env[Handle(v)] = up
    return env


def covers(partitions: List[Partition], run: DoubleRunResult) -> bool:
    """Is the concrete pair of environments in some partition?"""
    for p in partitions:
        env = _env_of(p, run)
        if env is not None and gamma_member(p.state, env):
            return True
    return False


def first_uncovered(program: L.Program, partitions: List[Partition], seeds, year_range=DEFAULT_YEAR_RANGE) -> Optional[int]:
    """First seed whose feasible double run is outside every partition."""
    for seed in seeds:
        run = run_double(program, seed, year_range)
        if run.feasible and not covers(partitions, run):
            return seed
    return None


# --- fast concrete double execution ---------------------------------------

def _add_months(t, n, up):
    y, m, d = t
    k = m - 1 + n
    y, m = y + k // 12, k % 12 + 1
    last = nb_days(y, m)
    if d <= last:
        return y, m, d
    if up:
        return (y + 1, 1, 1) if m == 12 else (y, m + 1, 1)
    return y, m, last


class DoubleRunner:
    """``run_double`` specialised to one program, on plain tuples.

    Draws go through the same sampler in the same order, so a seed gives
    the same environments as :func:`run_double`. Period day components are
    not supported (fuzzed programs have none).
    """

    def __init__(self, program: L.Program, year_range=DEFAULT_YEAR_RANGE):
        self.year_range = year_range
        self.bounds = _accessor_bounds(program)
        self._rng = random.Random()
        self.steps = []
        for stmt in program:
            if isinstance(stmt, L.DateDecl):
                self.steps.append(("decl", stmt.name, self._expr(stmt.expr, stmt.name)))
            else:
                kind = "assume" if isinstance(stmt, L.Assume) else "assert"
                self.steps.append((kind, None, self._bool(stmt.cond)))

    def _expr(self, e, var):
        if isinstance(e, L.Var):
            name = e.name
            return lambda eu, ed, draw: (eu[name], ed[name])
        if isinstance(e, L.Literal):
            t = (e.value.year, e.value.month, e.value.day)
            return lambda eu, ed, draw: (t, t)
        if isinstance(e, L.RandomDate):
            def rnd(eu, ed, draw):
                t = draw(var)
                return t, t
            return rnd
        inner = self._expr(e.expr, var)
        if isinstance(e, L.AddPeriod):
            if e.period.days:
                raise ValueError("day additions are not supported here")
            n = 12 * e.period.years + e.period.months
            def add(eu, ed, draw):
                a, b = inner(eu, ed, draw)
                return _add_months(a, n, True), _add_months(b, n, False)
            return add
        if isinstance(e, L.FirstDayOf):
            def first(eu, ed, draw):
                a, b = inner(eu, ed, draw)
                return (a[0], a[1], 1), (b[0], b[1], 1)
            return first
        if isinstance(e, L.LastDayOf):
            def last(eu, ed, draw):
                a, b = inner(eu, ed, draw)
                return (a[0], a[1], nb_days(a[0], a[1])), (b[0], b[1], nb_days(b[0], b[1]))
            return last
        raise TypeError(e)

    def _bool(self, e):
        if isinstance(e, L.Cmp):
            left, right, op = self._expr(e.left, None), self._expr(e.right, None), e.op
            def cmp(eu, ed, draw):
                lu, ld = left(eu, ed, draw)
                ru, rd = right(eu, ed, draw)
                return _cmp(op, lu, ru), _cmp(op, ld, rd)
            return cmp
        if isinstance(e, L.AccessorCmp):
            inner, op, k = self._expr(e.expr, None), e.op, e.value
            i = ("year", "month", "day").index(e.accessor)
            def acc(eu, ed, draw):
                a, b = inner(eu, ed, draw)
                return compare_op(op, a[i], k), compare_op(op, b[i], k)
            return acc
        if isinstance(e, L.Sync):
            inner = self._bool(e.expr)
            def sync(eu, ed, draw):
                a, b = inner(eu, ed, draw)
                return a == b, a == b
            return sync
        if isinstance(e, L.Not):
            inner = self._bool(e.expr)
            def neg(eu, ed, draw):
                a, b = inner(eu, ed, draw)
                return not a, not b
            return neg
        left, right = self._bool(e.left), self._bool(e.right)
        if isinstance(e, L.And):
            def conj(eu, ed, draw):
                lu, ld = left(eu, ed, draw)
                ru, rd = right(eu, ed, draw)
                return lu and ru, ld and rd
            return conj
        def disj(eu, ed, draw):
            lu, ld = left(eu, ed, draw)
            ru, rd = right(eu, ed, draw)
            return lu or ru, ld or rd
        return disj

    def run(self, seed: int):
        """``(feasible, env_up, env_down, assert_results)`` for one seed."""
        self._rng.seed(seed)
        sampler = DateSampler(self._rng, self.year_range, self.bounds)

        def draw(var):
            t = sampler.draw(var)
            return t.year, t.month, t.day

        eu: Dict[str, tuple] = {}
        ed: Dict[str, tuple] = {}
        results: List[bool] = []
        for kind, name, f in self.steps:
            a, b = f(eu, ed, draw)
            if kind == "decl":
                eu[name], ed[name] = a, b
            elif kind == "assume":
                if not (a and b):
                    return False, eu, ed, results
            else:
                results.append(a and b)
        return True, eu, ed, results


_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def _cmp(op, a, b):
    return _CMP[op](a, b)


def first_sync_failure(program: L.Program, seeds, year_range=DEFAULT_YEAR_RANGE) -> Optional[int]:
    """First seed whose feasible double run fails an assertion."""
    runner = DoubleRunner(program, year_range)
    for seed in seeds:
        feasible, _, _, results = runner.run(seed)
        if feasible and not all(results):
            return seed
    return None


# --- campaigns ---------------------------------------------------------------


@dataclass
class Campaign:
    programs: int = 0
    proven_programs: int = 0
    asserts: int = 0
    proven_asserts: int = 0
    uncovered: List[str] = field(default_factory=list)  # program sources
    false_proofs: List[str] = field(default_factory=list)
    max_partitions: int = 0


def campaign(n: int, seed: int = 0, cover_seeds: int = 20, sync_seeds: int = 1000, cfg: FuzzConfig = FuzzConfig()) -> Campaign:
    """Analyze ``n`` random programs and check them concretely.

    Every program gets ``cover_seeds`` double runs whose final environments
    must lie in some final partition. Programs whose asserts are all proven
    additionally get ``sync_seeds`` runs that must not fail an assert.
    """
    from .bidates import BiState

    rng = random.Random(seed)
    out = Campaign()
    for _ in range(n):
        src = random_program(rng, cfg)
        prog = L.parse(src)
        bi = BiState()
        verdicts = []
        for stmt in prog:
            if isinstance(stmt, L.DateDecl):
                bi.assign_date(stmt.name, stmt.expr)
            elif isinstance(stmt, L.Assume):
                bi.assume(stmt.cond)
            else:
                verdicts.append(bi.check(stmt.cond).proven)
        out.programs += 1
        out.asserts += len(verdicts)
        out.proven_asserts += sum(verdicts)
        out.max_partitions = max(out.max_partitions, bi.max_partitions)
        if first_uncovered(prog, bi.partitions, range(cover_seeds)) is not None:
            out.uncovered.append(src)
        if all(verdicts):
            out.proven_programs += 1
            if first_sync_failure(prog, range(sync_seeds)) is not None:
                out.false_proofs.append(src)
    return out
