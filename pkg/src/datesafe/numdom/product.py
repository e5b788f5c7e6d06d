"""Reduced product of intervals, congruences, bounded sets, linear
constraints and grids over named integer variables.

Layout of a state:

* ``itv``   variable -> ``(lo, hi)``, bounds are ints or ``±inf``; absent means unbounded
* ``sets``  variable -> frozenset of at most ``K`` values; absent means no set
* ``les``/``eqs``  relational linear constraints (two or more variables)
* ``grid``  linear congruences, see :mod:`.grid`

Per-variable congruences are read off the grid. A variable whose interval is
a single value is a *constant*: it is substituted out of the relational
components and lives in ``itv`` only. States are treated as immutable; every
operation returns a new state.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import count
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from . import poly as P
from .expr import (
    And,
    BinOp,
    BoolConst,
    BoolExpr,
    Cmp,
    Const,
    NumExpr,
    Not,
    Or,
    Var,
    negate,
)
from .grid import Grid

__all__ = ["ProductState", "K", "INF"]

INF = math.inf
K = 4
_REDUCE_ROUNDS = 6

Lin = Tuple[Dict[str, int], int]


def _fdiv(a, b):
    # floor(a / b) for b > 0 with infinities passed through
    if a in (INF, -INF):
        return a
    return a // b


def _cdiv(a, b):
    if a in (INF, -INF):
        return a
    return -((-a) // b)


class ProductState:
    __slots__ = ("vars", "itv", "sets", "les", "eqs", "grid", "bottom")

    def __init__(self, vars: Iterable[str] = (), bottom: bool = False):
        self.vars: FrozenSet[str] = frozenset(vars)
        self.itv: Dict[str, Tuple] = {}
        self.sets: Dict[str, FrozenSet[int]] = {}
        self.les: Dict[P.Terms, int] = {}
        self.eqs: Dict[P.Terms, int] = {}
        self.grid = Grid()
        self.bottom = bottom

    # --- construction --------------------------------------------------------

    @classmethod
    def top(cls, vars: Iterable[str] = ()) -> "ProductState":
        return cls(vars)

    @classmethod
    def bottom_state(cls, vars: Iterable[str] = ()) -> "ProductState":
        return cls(vars, bottom=True)

    def is_bottom(self) -> bool:
        return self.bottom

    def copy(self) -> "ProductState":
        s = ProductState.__new__(ProductState)
        s.vars = self.vars
        s.itv = dict(self.itv)
        s.sets = dict(self.sets)
        s.les = dict(self.les)
        s.eqs = dict(self.eqs)
        s.grid = self.grid
        s.bottom = self.bottom
        return s

    def _make_bottom(self) -> "ProductState":
        self.bottom = True
        self.itv, self.sets, self.les, self.eqs, self.grid = {}, {}, {}, {}, Grid()
        return self

    def add_var(self, v: str) -> "ProductState":
        return self.add_vars([v])

    def add_vars(self, vs: Iterable[str]) -> "ProductState":
        s = self.copy()
        s.vars = s.vars | frozenset(vs)
        return s

    # --- queries -------------------------------------------------------------

    def interval_of(self, v: str) -> Tuple:
        if self.bottom:
            return (INF, -INF)
        return self.itv.get(v, (-INF, INF))

    def constant(self, v: str) -> Optional[int]:
        lo, hi = self.interval_of(v)
        return lo if lo == hi else None

    def set_of(self, v: str) -> Optional[FrozenSet[int]]:
        """The finite value set of ``v`` if one is known (size at most ``K``)."""
        if v in self.sets:
            return self.sets[v]
        lo, hi = self.interval_of(v)
        if lo != -INF and hi != INF and hi - lo < K:
            m, c = self.cong_of(v)
            return frozenset(x for x in range(lo, hi + 1) if m <= 1 or x % m == c)
        return None

    def cong_of(self, v: str) -> Tuple[int, int]:
        """``(m, c)``: ``v = c (mod m)``; ``m == 0`` means ``v == c``."""
        k = self.constant(v)
        if k is not None:
            return 0, k
        return self.grid.cong_of(v)

    def values(self, v: str, limit: int = 64) -> Optional[List[int]]:
        """All possible values of ``v`` if there are at most ``limit``."""
        s = self.set_of(v)
        if s is not None:
            return sorted(s)
        lo, hi = self.interval_of(v)
        if lo == -INF or hi == INF or hi - lo >= limit * max(1, self.cong_of(v)[0]):
            return None
        m, c = self.cong_of(v)
        return [x for x in range(lo, hi + 1) if m <= 1 or x % m == c % m]

    def constants(self) -> Dict[str, int]:
        return {v: lo for v, (lo, hi) in self.itv.items() if lo == hi}

    def equalities(self) -> List[Tuple[Dict[str, int], int]]:
        return [(dict(t), b) for t, b in self.eqs.items()]

    def inequalities(self) -> List[Tuple[Dict[str, int], int]]:
        return [(dict(t), b) for t, b in self.les.items()]

    # --- constraint intake ---------------------------------------------------

    def _subst_consts(self, coefs: Dict[str, int], c: int) -> Lin:
        out = {}
        for v, a in coefs.items():
            lo, hi = self.itv.get(v, (-INF, INF))
            if lo == hi:
                c += a * lo
            elif a:
                out[v] = out.get(v, 0) + a
        return out, c

    def _bound(self, v: str, lo, hi) -> bool:
        """Intersect the interval of ``v``; True when it changed."""
        olo, ohi = self.itv.get(v, (-INF, INF))
        nlo = lo if lo > olo else olo
        nhi = hi if hi < ohi else ohi
        if nlo == olo and nhi == ohi:
            return False
        if nlo > nhi:
            self._make_bottom()
            return True
        self.itv[v] = (nlo, nhi)
        return True

    def _add_le(self, coefs: Dict[str, int], c: int) -> None:
        """``sum(coefs) + c <= 0``."""
        coefs, c = self._subst_consts(coefs, c)
        if not coefs:
            if c > 0:
                self._make_bottom()
            return
        if len(coefs) == 1:
            (v, a), = coefs.items()
            if a > 0:
                self._bound(v, -INF, _fdiv(-c, a))
            else:
                self._bound(v, _cdiv(c, -a), INF)
            return
        n = P.norm_le(coefs, -c)
        t, b = n
        old = self.les.get(t)
        if old is not None and old <= b:
            return
        neg = tuple((v, -a) for v, a in t)
        for tt, sign in ((t, 1), (neg, -1)):
            e = self.eqs.get(tt)
            if e is not None:
                if sign * e > b:
                    self._make_bottom()
                return
        if self.les.get(neg) is not None and -self.les[neg] > b:
            self._make_bottom()
            return
        self.les[t] = b
        if self.les.get(neg) == -b:
            # t <= b and t >= b
            del self.les[t]
            del self.les[neg]
            self._add_eq(dict(t), -b)

    def _add_eq(self, coefs: Dict[str, int], c: int) -> None:
        """``sum(coefs) + c == 0``."""
        coefs, c = self._subst_consts(coefs, c)
        if not coefs:
            if c != 0:
                self._make_bottom()
            return
        if len(coefs) == 1:
            (v, a), = coefs.items()
            if c % a:
                self._make_bottom()
                return
            k = -c // a
            self._bound(v, k, k)
            return
        n = P.norm_eq(coefs, -c)
        if n is False:
            self._make_bottom()
            return
        t, b = n
        old = self.eqs.get(t)
        if old is not None:
            if old != b:
                self._make_bottom()
            return
        self.eqs[t] = b
        g = self.grid.assume(dict(t), b)
        if g is None:
            self._make_bottom()
            return
        self.grid = g

    def _add_cong(self, coefs: Dict[str, int], c: int, m: int) -> None:
        """``sum(coefs) + c == 0 (mod m)``."""
        coefs, c = self._subst_consts(coefs, c)
        if m == 0:
            self._add_eq(coefs, c)
            return
        if not coefs:
            if c % m:
                self._make_bottom()
            return
        g = self.grid.assume(coefs, -c, m)
        if g is None:
            self._make_bottom()
            return
        self.grid = g

    def _add_ne(self, coefs: Dict[str, int], c: int) -> None:
        coefs, c = self._subst_consts(coefs, c)
        if not coefs:
            if c == 0:
                self._make_bottom()
            return
        if len(coefs) != 1:
            # relational disequalities are dropped unless the equality is known
            if self._entails_eq(coefs, -c):
                self._make_bottom()
            return
        (v, a), = coefs.items()
        if c % a:
            return
        k = -c // a
        s = self.set_of(v)
        if s is not None:
            self._restrict_set(v, s - {k})
            return
        lo, hi = self.interval_of(v)
        if lo == k:
            self._bound(v, k + 1, INF)
        elif hi == k:
            self._bound(v, -INF, k - 1)

    def _restrict_set(self, v: str, values: Iterable[int]) -> None:
        vals = frozenset(values)
        old = self.sets.get(v)
        if old is not None:
            vals &= old
        lo, hi = self.itv.get(v, (-INF, INF))
        vals = frozenset(x for x in vals if lo <= x <= hi)
        if not vals:
            self._make_bottom()
            return
        if len(vals) <= K:
            self.sets[v] = vals
        else:
            # too many values for the set: keep their common congruence
            base = min(vals)
            m = math.gcd(*(x - base for x in vals))
            if m > 1:
                self._add_cong({v: 1}, -base, m)
                if self.bottom:
                    return
        self._bound(v, min(vals), max(vals))

    # --- fresh temporaries ---------------------------------------------------

    _fresh = count()

    def _temp(self) -> str:
        name = f"$n{next(ProductState._fresh)}"
        self.vars = self.vars | {name}
        return name

    def _lin_bounds(self, lin: Lin) -> Tuple:
        coefs, c = lin
        lo = hi = c
        for v, a in coefs.items():
            vlo, vhi = self.interval_of(v)
            if a > 0:
                lo, hi = lo + a * vlo, hi + a * vhi
            else:
                lo, hi = lo + a * vhi, hi + a * vlo
        return lo, hi

    def _lin(self, e: NumExpr, temps: List[str]) -> Lin:
        """Affine form of ``e``; div/mod and products introduce temporaries."""
        if isinstance(e, Var):
            return {e.name: 1}, 0
        if isinstance(e, Const):
            return {}, e.value
        if e.op in ("+", "-"):
            a = self._lin(e.left, temps)
            b = self._lin(e.right, temps)
            s = 1 if e.op == "+" else -1
            coefs = dict(a[0])
            for v, k in b[0].items():
                coefs[v] = coefs.get(v, 0) + s * k
            return {v: k for v, k in coefs.items() if k}, a[1] + s * b[1]
        if e.op == "*":
            a = self._lin(e.left, temps)
            b = self._lin(e.right, temps)
            a = self._subst_consts(*a)
            b = self._subst_consts(*b)
            if not a[0]:
                a, b = b, a
            if not b[0]:
                k = b[1]
                return {v: x * k for v, x in a[0].items() if x * k}, a[1] * k
            # non-linear: bound the product by interval arithmetic
            alo, ahi = self._lin_bounds(a)
            blo, bhi = self._lin_bounds(b)
            t = self._temp()
            temps.append(t)
            prods = []
            for x in (alo, ahi):
                for y in (blo, bhi):
                    if x == 0 or y == 0:
                        prods.append(0)
                    else:
                        prods.append(x * y)
            self._bound(t, min(prods), max(prods))
            return {t: 1}, 0
        # div / mod by a constant
        inner = self._lin(e.left, temps)
        k = e.right.value
        q = self._temp()
        r = self._temp()
        temps.extend((q, r))
        coefs = dict(inner[0])
        coefs[q] = coefs.get(q, 0) - k
        coefs[r] = coefs.get(r, 0) - 1
        # inner = k*q + r, floor semantics
        if k > 0:
            self._bound(r, 0, k - 1)
        else:
            self._bound(r, k + 1, 0)
        self._add_eq(coefs, inner[1])
        return ({q: 1}, 0) if e.op == "div" else ({r: 1}, 0)

    # --- reduction -----------------------------------------------------------

    def _poly_vars(self) -> set:
        out = set()
        for t in self.les:
            out.update(v for v, _ in t)
        for t in self.eqs:
            out.update(v for v, _ in t)
        return out

    def _push_constants(self) -> bool:
        """Substitute constants out of the relational components."""
        consts = self.constants()
        changed = False
        hit = [t for t in self.les if any(v in consts for v, _ in t)]
        if hit:
            changed = True
            old = [(t, self.les.pop(t)) for t in hit]
            for t, b in old:
                self._add_le(dict(t), -b)
                if self.bottom:
                    return True
        hit = [t for t in self.eqs if any(v in consts for v, _ in t)]
        if hit:
            changed = True
            old = [(t, self.eqs.pop(t)) for t in hit]
            for t, b in old:
                coefs, c = self._subst_consts(dict(t), -b)
                if not coefs:
                    if c:
                        self._make_bottom()
                        return True
                    continue
                if len(coefs) == 1:
                    self._add_eq(coefs, c)
                else:
                    n = P.norm_eq(coefs, -c)
                    if n is False:
                        self._make_bottom()
                        return True
                    self.eqs[n[0]] = n[1]
                if self.bottom:
                    return True
        gone = [v for v in self.grid.vars if v in consts]
        if gone:
            changed = True
            g = self.grid
            for v in gone:
                g = g.assume({v: 1}, consts[v])
                if g is None:
                    self._make_bottom()
                    return True
            self.grid = g.drop(gone)
        return changed

    def _grid_to_itv(self) -> bool:
        changed = False
        for v in self.grid.vars:
            m, c = self.grid.cong_of(v)
            if m == 0:
                changed |= self._bound(v, c, c)
            elif m > 1:
                lo, hi = self.itv.get(v, (-INF, INF))
                nlo = lo if lo == -INF else lo + (c - lo) % m
                nhi = hi if hi == INF else hi - (hi - c) % m
                changed |= self._bound(v, nlo, nhi)
                if v in self.sets:
                    s = self.sets[v]
                    ns = frozenset(x for x in s if x % m == c)
                    if ns != s:
                        changed = True
                        self._restrict_set(v, ns)
            if self.bottom:
                return True
        return changed

    def _sets_to_itv(self) -> bool:
        changed = False
        for v, s in list(self.sets.items()):
            lo, hi = self.itv.get(v, (-INF, INF))
            ns = frozenset(x for x in s if lo <= x <= hi)
            if not ns:
                self._make_bottom()
                return True
            if ns != s:
                self.sets[v] = ns
                changed = True
            changed |= self._bound(v, min(ns), max(ns))
            if len(ns) == 1 and v in self.sets:
                del self.sets[v]
        return changed

    def _rows(self):
        for t, b in self.les.items():
            yield t, b
        for t, b in self.eqs.items():
            yield t, b
            yield tuple((v, -a) for v, a in t), -b

    def _propagate(self) -> bool:
        """Interval bounds implied by each relational constraint."""
        if not self.les and not self.eqs:
            return False
        changed = False
        for t, b in list(self._rows()):
            if self.bottom:
                return True
            mins = []
            ninf = 0
            total = 0
            for v, a in t:
                lo, hi = self.itv.get(v, (-INF, INF))
                m = a * lo if a > 0 else a * hi
                mins.append(m)
                if m == -INF:
                    ninf += 1
                else:
                    total += m
            if ninf > 1:
                continue
            for (v, a), m in zip(t, mins):
                if m == -INF:
                    rest = total
                elif ninf:
                    continue
                else:
                    rest = total - m
                room = b - rest  # a * v <= room
                if a > 0:
                    changed |= self._bound(v, -INF, room // a)
                else:
                    changed |= self._bound(v, -(room // (-a)), INF)
                if self.bottom:
                    return True
        return changed

    def _sets_through_eqs(self) -> bool:
        changed = False
        for t, b in list(self.eqs.items()):
            if len(t) != 2:
                continue
            (x, a), (y, c) = t
            for (u, au), (w, aw) in (((x, a), (y, c)), ((y, c), (x, a))):
                ws = self.set_of(w)
                if ws is None:
                    continue
                cand = {(b - aw * val) // au for val in ws if (b - aw * val) % au == 0}
                old = self.set_of(u)
                if old is not None and old <= cand:
                    continue
                self._restrict_set(u, cand)
                changed = True
                if self.bottom:
                    return True
        return changed

    def _sets_through_grid(self) -> bool:
        """Value sets carried across two-variable congruences of the grid."""
        g = self.grid
        if len(g.vars) < 2:
            return False
        linked = g.linked_pairs()
        if not linked:
            return False
        changed = False
        for w in g.vars:
            ws = self.set_of(w)
            if ws is None:
                continue
            for u in g.vars:
                if u == w or (u, w) not in linked:
                    continue
                lo, hi = self.itv.get(u, (-INF, INF))
                if lo == -INF or hi == INF or hi - lo > 31:
                    continue
                link = _link(_pair_lattice(g, w, u), ws)
                if link is None:
                    continue  # no relation between u and w
                cand = set()
                for mc in link:
                    if mc is None:
                        continue
                    m, c = mc
                    if m == 0:
                        if lo <= c <= hi:
                            cand.add(c)
                    else:
                        cand.update(range(lo + (c - lo) % m, hi + 1, m))
                known = self.values(u, 32)
                if known is not None and cand.issuperset(known):
                    continue
                before = (self.itv.get(u), self.sets.get(u))
                self._restrict_set(u, cand)
                if self.bottom:
                    return True
                if (self.itv.get(u), self.sets.get(u)) != before:
                    changed = True
                if self.grid is not g:
                    g = self.grid
                    linked = g.linked_pairs()
        return changed

    def _small_itv_to_sets(self) -> None:
        for v, (lo, hi) in self.itv.items():
            if v not in self.sets and lo != hi and hi - lo < K:
                m, c = self.grid.cong_of(v)
                self.sets[v] = frozenset(x for x in range(lo, hi + 1) if m <= 1 or x % m == c)

    def _relational_les(self) -> bool:
        return bool(self.les)

    def _fm_check(self) -> None:
        """Integer feasibility of each component holding an inequality."""
        rows = [(t, b, True) for t, b in self.les.items()] + [(t, b, False) for t, b in self.eqs.items()]
        parent: Dict[str, str] = {}

        def find(v):
            while parent.setdefault(v, v) != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for t, _, _ in rows:
            r = find(t[0][0])
            for v, _ in t[1:]:
                parent[find(v)] = r
        groups: Dict[str, List] = {}
        for row in rows:
            groups.setdefault(find(row[0][0][0]), []).append(row)
        for group in groups.values():
            if not any(is_le for _, _, is_le in group):
                continue
            vs = sorted({v for t, _, _ in group for v, _ in t})
            bounds = tuple((v,) + self.itv.get(v, (-INF, INF)) for v in vs)
            key = (frozenset(group), bounds)
            if key in _FEASIBLE:
                continue
            les = [(dict(t), b) for t, b, is_le in group if is_le]
            for v, lo, hi in bounds:
                if hi != INF:
                    les.append(({v: 1}, hi))
                if lo != -INF:
                    les.append(({v: -1}, -lo))
            if not P.feasible([(dict(t), b) for t, b, is_le in group if not is_le], les):
                self._make_bottom()
                return
            if len(_FEASIBLE) > 1 << 15:
                _FEASIBLE.clear()
            _FEASIBLE.add(key)

    def _reduce(self, fm: bool = True) -> "ProductState":
        """Exchange facts between the components until stable.

        ``fm`` runs the relational emptiness test; transfer functions that
        cannot empty a non-empty state (assignment, projection, join) skip it.
        """
        for _ in range(_REDUCE_ROUNDS):
            if self.bottom:
                return self
            changed = self._grid_to_itv()
            if self.bottom:
                return self
            changed |= self._sets_to_itv()
            if self.bottom:
                return self
            changed |= self._push_constants()
            if self.bottom:
                return self
            changed |= self._propagate()
            if self.bottom:
                return self
            changed |= self._sets_through_eqs()
            if self.bottom:
                return self
            changed |= self._sets_through_grid()
            if not changed:
                break
        if self.bottom:
            return self
        self._small_itv_to_sets()
        if fm and self._relational_les():
            self._fm_check()
        return self

    def reduce(self) -> "ProductState":
        return self.copy()._reduce()

    # --- transfer functions --------------------------------------------------

    def _atom(self, c: Cmp) -> None:
        if self.bottom:
            return
        op = c.op
        left, right = c.left, c.right
        # e mod k == r goes straight to the grid
        if op == "==":
            if isinstance(right, BinOp) and right.op == "mod" and isinstance(left, Const):
                left, right = right, left
            if isinstance(left, BinOp) and left.op == "mod" and isinstance(right, Const):
                k = left.right.value
                r = right.value
                if not 0 <= r < k:
                    self._make_bottom()
                    return
                temps: List[str] = []
                inner = self._lin(left.left, temps)
                self._add_cong(inner[0], inner[1] - r, k)
                self._drop_temps(temps)
                return
        temps = []
        a = self._lin(left, temps)
        b = self._lin(right, temps)
        coefs = dict(a[0])
        for v, k in b[0].items():
            coefs[v] = coefs.get(v, 0) - k
        coefs = {v: k for v, k in coefs.items() if k}
        const = a[1] - b[1]
        if op == "<":
            self._add_le(coefs, const + 1)
        elif op == "<=":
            self._add_le(coefs, const)
        elif op == ">":
            self._add_le({v: -k for v, k in coefs.items()}, 1 - const)
        elif op == ">=":
            self._add_le({v: -k for v, k in coefs.items()}, -const)
        elif op == "==":
            self._add_eq(coefs, const)
        elif op == "!=":
            self._add_ne(coefs, const)
        else:
            raise ValueError(op)
        if temps:
            self._reduce()
            self._drop_temps(temps)

    def _drop_temps(self, temps: List[str]) -> None:
        if self.bottom or not temps:
            return
        self._forget(temps)
        self.vars = self.vars - frozenset(temps)

    def _is_value_or(self, leaves: List[BoolExpr]) -> Optional[Tuple[str, List[int]]]:
        target = None
        values = []
        for leaf in leaves:
            if not isinstance(leaf, Cmp) or leaf.op != "==":
                return None
            a = _plain_lin(leaf.left)
            b = _plain_lin(leaf.right)
            if a is None or b is None:
                return None
            coefs = dict(a[0])
            for v, k in b[0].items():
                coefs[v] = coefs.get(v, 0) - k
            coefs = {v: k for v, k in coefs.items() if k}
            if len(coefs) != 1:
                return None
            (v, k), = coefs.items()
            if target not in (None, v):
                return None
            target = v
            num = b[1] - a[1]
            if num % k == 0:
                values.append(num // k)
        return (target, values) if target is not None else None

    def _assume(self, c: BoolExpr) -> "ProductState":
        """Refine ``self`` in place where possible; returns the result."""
        if self.bottom:
            return self
        if isinstance(c, BoolConst):
            if not c.value:
                self._make_bottom()
            return self
        if isinstance(c, Not):
            return self._assume(negate(c.expr))
        if isinstance(c, And):
            # atoms of a conjunction are added together, then reduced once
            s = self
            for leaf in _and_leaves(c):
                if s.bottom:
                    return s
                if isinstance(leaf, Cmp):
                    s._atom(leaf)
                else:
                    s = s._assume(leaf)
            return s if s.bottom else s._reduce()
        if isinstance(c, Or):
            leaves = _or_leaves(c)
            vo = self._is_value_or(leaves)
            if vo is not None:
                v, values = vo
                self._restrict_set(v, values)
                return self._reduce()
            out = None
            for leaf in leaves:
                branch = self.copy()._assume(leaf)
                if branch.bottom:
                    continue
                out = branch if out is None else out.join(branch)
            if out is None:
                return self._make_bottom()
            return out
        if isinstance(c, Cmp):
            self._atom(c)
            return self._reduce()
        raise TypeError(c)

    def assume(self, c: BoolExpr) -> "ProductState":
        """States of ``self`` satisfying ``c`` (over-approximated)."""
        return self.copy()._assume(c)

    def assume_cong(self, e: NumExpr, r: int, m: int) -> "ProductState":
        """``e == r (mod m)``; ``m == 0`` is an equality."""
        s = self.copy()
        temps: List[str] = []
        lin = s._lin(e, temps)
        s._add_cong(lin[0], lin[1] - r, m)
        s._reduce()
        s._drop_temps(temps)
        return s._reduce() if not s.bottom else s

    def assume_in(self, v: str, values: Iterable[int]) -> "ProductState":
        s = self.copy()
        s._restrict_set(v, values)
        return s._reduce()

    def assign(self, v: str, e: NumExpr) -> "ProductState":
        """Strong update ``v <- e``."""
        if self.bottom:
            return self
        from .expr import expr_vars, lift

        e = lift(e)
        if v in expr_vars(e):
            s = self.copy()
            tmp = s._temp()
            s = s.assign(tmp, e)
            s = s.forget(v)
            return s.rename({tmp: v})
        return self.assign_all({v: e})

    def assign_all(self, updates: Mapping[str, NumExpr]) -> "ProductState":
        """Simultaneous strong updates; targets must not occur in the expressions."""
        if self.bottom:
            return self
        from .expr import expr_vars, lift

        updates = {v: lift(e) for v, e in updates.items()}
        used = set()
        for e in updates.values():
            used |= expr_vars(e)
        if used & set(updates):
            s = self
            for v, e in updates.items():
                s = s.assign(v, e)
            return s
        s = self.copy()
        s.vars = s.vars | frozenset(updates)
        s._forget(updates)
        temps: List[str] = []
        for v, e in updates.items():
            lin = s._lin(e, temps)
            coefs = dict(lin[0])
            coefs[v] = coefs.get(v, 0) - 1
            s._add_eq(coefs, lin[1])
            if s.bottom:
                return s
        s._reduce(fm=False)
        if temps:
            s._drop_temps(temps)
            s._reduce(fm=False)
        return s

    def _forget(self, vs: Iterable[str]) -> None:
        vs = set(vs)
        if not vs or self.bottom:
            return
        pvars = self._poly_vars()
        hit = vs & pvars
        if hit:
            les = [(dict(t), b) for t, b in self.les.items()]
            for v in hit:
                lo, hi = self.itv.get(v, (-INF, INF))
                if hi != INF:
                    les.append(({v: 1}, hi))
                if lo != -INF:
                    les.append(({v: -1}, -lo))
            res = P.eliminate([(dict(t), b) for t, b in self.eqs.items()], les, hit)
            for v in vs:
                self.itv.pop(v, None)
                self.sets.pop(v, None)
            if res is None:
                self._make_bottom()
                return
            eqs, new_les, _ = res
            old_eqs = self.eqs
            self.eqs, self.les = {}, {}
            for t, b in eqs.items():
                if old_eqs.get(t) == b:
                    self.eqs[t] = b
                else:
                    self._add_eq(dict(t), -b)
            for t, b in new_les.items():
                self._add_le(dict(t), -b)
        else:
            for v in vs:
                self.itv.pop(v, None)
                self.sets.pop(v, None)
        if any(v in self.grid for v in vs):
            self.grid = self.grid.drop(vs)

    def forget(self, v) -> "ProductState":
        """Lose all information on ``v`` (a name or an iterable of names)."""
        vs = [v] if isinstance(v, str) else list(v)
        s = self.copy()
        s._forget(vs)
        return s._reduce(fm=False) if not s.bottom else s

    def remove(self, vs: Iterable[str]) -> "ProductState":
        """Forget and unregister ``vs``."""
        vs = list(vs)
        s = self.copy()
        s._forget(vs)
        s.vars = s.vars - frozenset(vs)
        return s._reduce(fm=False) if not s.bottom else s

    def project(self, keep: Iterable[str]) -> "ProductState":
        keep = frozenset(keep)
        return self.remove([v for v in self.vars if v not in keep])

    def rename(self, mapping: Mapping[str, str]) -> "ProductState":
        mp = dict(mapping)
        s = self.copy()
        s.vars = frozenset(mp.get(v, v) for v in self.vars)
        if s.bottom:
            return s
        s.itv = {mp.get(v, v): b for v, b in self.itv.items()}
        s.sets = {mp.get(v, v): b for v, b in self.sets.items()}
        s.les = {}
        for t, b in self.les.items():
            n = P.norm_le({mp.get(v, v): a for v, a in t}, b)
            s.les[n[0]] = n[1]
        s.eqs = {}
        for t, b in self.eqs.items():
            n = P.norm_eq({mp.get(v, v): a for v, a in t}, b)
            s.eqs[n[0]] = n[1]
        s.grid = self.grid.rename(mp)
        return s

    # --- lattice -------------------------------------------------------------

    def _entails_le(self, coefs: Dict[str, int], b: int) -> bool:
        """Does every point satisfy ``sum(coefs) <= b``?"""
        if self.bottom:
            return True
        coefs, c = self._subst_consts(coefs, -b)
        if not coefs:
            return c <= 0
        lo, hi = self._lin_bounds((coefs, c))
        if hi <= 0:
            return True
        n = P.norm_le(coefs, -c)
        t, bb = n
        if t in self.les and self.les[t] <= bb:
            return True
        if len(coefs) == 1:
            return False
        if not self._poly_vars() >= set(coefs):
            return False
        les = [(dict(x), y) for x, y in self.les.items()]
        for v in self._poly_vars():
            vlo, vhi = self.itv.get(v, (-INF, INF))
            if vhi != INF:
                les.append(({v: 1}, vhi))
            if vlo != -INF:
                les.append(({v: -1}, -vlo))
        les.append(({v: -a for v, a in coefs.items()}, c - 1))
        return not P.feasible([(dict(x), y) for x, y in self.eqs.items()], les)

    def _entails_eq(self, coefs: Dict[str, int], b: int) -> bool:
        if self.bottom:
            return True
        sc, c = self._subst_consts(coefs, -b)
        if not sc:
            return c == 0
        n = P.norm_eq(sc, -c)
        if n is False:
            return False
        if n[0] in self.eqs:
            return self.eqs[n[0]] == n[1]
        if all(v in self.grid for v in sc) and self.grid.entails(dict(n[0]), n[1]):
            return True
        return self._entails_le(sc, -c) and self._entails_le({v: -a for v, a in sc.items()}, c)

    def _fixed(self, vs: Iterable[str]) -> Dict[str, int]:
        out = {}
        for v in vs:
            k = self.constant(v)
            if k is not None:
                out[v] = k
        return out

    def join(self, other: "ProductState") -> "ProductState":
        if self.bottom:
            return other.add_vars(self.vars) if not other.bottom else ProductState.bottom_state(self.vars | other.vars)
        if other.bottom:
            return self.add_vars(other.vars)
        s = ProductState(self.vars | other.vars)
        for v in set(self.itv) & set(other.itv):
            alo, ahi = self.itv[v]
            blo, bhi = other.itv[v]
            lo, hi = min(alo, blo), max(ahi, bhi)
            if lo != -INF or hi != INF:
                s.itv[v] = (lo, hi)
        for v in s.vars:
            sa = self.set_of(v)
            sb = other.set_of(v)
            if sa is not None and sb is not None:
                u = sa | sb
                if len(u) <= K:
                    s.sets[v] = u
        # grid: constants of either side come back as pinned coordinates
        gv = set(self.grid.vars) | set(other.grid.vars)
        ca, cb = self.constants(), other.constants()
        for v in set(ca) | set(cb):
            if ca.get(v) != cb.get(v):
                gv.add(v)
        ga = self.grid.with_vars(sorted(gv), ca)
        gb = other.grid.with_vars(sorted(gv), cb)
        s.grid = ga.join(gb)
        # linear constraints kept when the other side entails them
        for src, dst in ((self, other), (other, self)):
            for t, b in src.les.items():
                if dst._entails_le(dict(t), b):
                    s._add_le(dict(t), -b)
            for t, b in src.eqs.items():
                c = dict(t)
                if dst._entails_eq(c, b):
                    s._add_eq(c, -b)
                else:
                    if dst._entails_le(c, b):
                        s._add_le(c, -b)
                    neg = {v: -a for v, a in c.items()}
                    if dst._entails_le(neg, -b):
                        s._add_le(neg, b)
        return s._reduce(fm=False)

    def meet(self, other: "ProductState") -> "ProductState":
        if self.bottom or other.bottom:
            return ProductState.bottom_state(self.vars | other.vars)
        s = self.copy()
        s.vars = self.vars | other.vars
        for v, (lo, hi) in other.itv.items():
            s._bound(v, lo, hi)
            if s.bottom:
                return s
        for v, vals in other.sets.items():
            s._restrict_set(v, vals)
            if s.bottom:
                return s
        g = s.grid.meet(other.grid)
        if g is None:
            return s._make_bottom()
        s.grid = g
        for t, b in other.les.items():
            s._add_le(dict(t), -b)
        for t, b in other.eqs.items():
            s._add_eq(dict(t), -b)
            if s.bottom:
                return s
        return s._reduce()

    def leq(self, other: "ProductState") -> bool:
        """Sound inclusion test: True implies gamma(self) <= gamma(other)."""
        if self.bottom:
            return True
        if other.bottom:
            return False
        for v, (lo, hi) in other.itv.items():
            slo, shi = self.interval_of(v)
            if slo < lo or shi > hi:
                return False
        for v, vals in other.sets.items():
            mine = self.set_of(v)
            if mine is None or not mine <= vals:
                return False
        for t, b in other.les.items():
            if not self._entails_le(dict(t), b):
                return False
        for t, b in other.eqs.items():
            if not self._entails_eq(dict(t), b):
                return False
        gv = sorted(set(other.grid.vars))
        mine = self.grid.drop([v for v in self.grid.vars if v not in other.grid]).with_vars(gv, self._fixed(gv))
        return mine.leq(other.grid)

    def entails(self, c: BoolExpr) -> bool:
        """True when every point of ``self`` satisfies ``c``."""
        return self.assume(negate(c)).bottom

    def member(self, env: Mapping[str, int]) -> bool:
        """Is the integer point ``env`` (covering all constrained vars) in gamma?"""
        if self.bottom:
            return False
        for v, (lo, hi) in self.itv.items():
            if not lo <= env[v] <= hi:
                return False
        for v, vals in self.sets.items():
            if env[v] not in vals:
                return False
        for t, b in self.les.items():
            if sum(a * env[v] for v, a in t) > b:
                return False
        for t, b in self.eqs.items():
            if sum(a * env[v] for v, a in t) != b:
                return False
        return self.grid.contains({v: env[v] for v in self.grid.vars})

    # --- rendering -----------------------------------------------------------

    def render(self) -> List[str]:
        """Facts as text: ``v = [lo,hi]``, ``v =[m] c``, linear constraints."""
        if self.bottom:
            return ["⊥"]
        out = []
        for v in sorted(self.vars):
            lo, hi = self.interval_of(v)
            if lo == hi:
                out.append(f"{v} = {lo}")
            elif lo != -INF or hi != INF:
                out.append(f"{v} = [{_num(lo)},{_num(hi)}]")
            if v in self.sets:
                out.append(f"{v} ∈ {{{','.join(str(x) for x in sorted(self.sets[v]))}}}")
            m, c = self.cong_of(v)
            if m > 1:
                out.append(f"{v} =[{m}] {c}")
        for t, b in sorted(self.eqs.items()):
            out.append(f"{_lin_text(t)} = {b}")
        for t, b in sorted(self.les.items()):
            out.append(f"{_lin_text(t)} <= {b}")
        return out

    def __repr__(self) -> str:
        return "{" + ", ".join(self.render()) + "}"


# constraint systems already shown to have an integer point
_FEASIBLE: set = set()


def _pair_lattice(g: Grid, w: str, u: str) -> Tuple[int, int, int, int, int]:
    """Projection of ``g`` onto ``(w, u)`` as ``(a, b, c, w0, u0)``.

    The projected lattice is spanned by rows ``(a, b)`` and ``(0, c)`` with
    ``a, c >= 0`` and ``0 <= b < c`` when ``c > 0``.
    """
    iw, iu = g._index[w], g._index[u]
    rows = [(r[iw], r[iu]) for r in g.gens if r[iw] or r[iu]]
    a, b, c = 0, 0, 0
    for x, y in rows:
        # fold (x, y) into the echelon pair {(a, b), (0, c)}
        while x:
            q = a // x
            a, b, x, y = x, y, a - q * x, b - q * y
        c = math.gcd(c, y)
    if a < 0:
        a, b = -a, -b
    if c:
        b %= c
    return a, b, c, g.x0[iw], g.x0[iu]


@lru_cache(maxsize=1 << 16)
def _link(lat: Tuple[int, int, int, int, int], ws: FrozenSet[int]):
    """Residue class ``(m, c)`` of ``u`` for each value of ``w`` (sorted), or
    None when the projected lattice does not relate the two."""
    a, b, c, w0, u0 = lat
    if a and c and b % c == 0:
        return None
    out = []
    for val in sorted(ws):
        if a == 0:
            k = 0 if val == w0 else None
        else:
            k = (val - w0) // a if (val - w0) % a == 0 else None
        if k is None:
            out.append(None)
            continue
        x = u0 + k * b
        out.append((c, x % c) if c else (0, x))
    return tuple(out)


def _num(x) -> str:
    if x == INF:
        return "+oo"
    if x == -INF:
        return "-oo"
    return str(x)


def _lin_text(t: P.Terms) -> str:
    parts = []
    for i, (v, a) in enumerate(t):
        sign = "-" if a < 0 else ("+" if i else "")
        mag = abs(a)
        term = v if mag == 1 else f"{mag}{v}"
        parts.append(f"{sign} {term}" if i else f"{sign}{term}")
    return " ".join(parts)


def _and_leaves(c: BoolExpr) -> List[BoolExpr]:
    if isinstance(c, And):
        return _and_leaves(c.left) + _and_leaves(c.right)
    return [c]


def _or_leaves(c: BoolExpr) -> List[BoolExpr]:
    if isinstance(c, Or):
        return _or_leaves(c.left) + _or_leaves(c.right)
    return [c]


def _plain_lin(e: NumExpr) -> Optional[Lin]:
    from .expr import linearize

    return linearize(e)
