"""Linear congruence domain in generator form.

A grid over coordinates ``vars`` is the integer lattice ``x0 + Z-span(gens)``.
Generators are kept in a row-reduced (Hermite-style) echelon form and ``x0``
is reduced modulo them, so two equal grids have the same representation.
A coordinate absent from ``vars`` is unconstrained.

Constraints ``a.x = b`` and ``a.x = b (mod m)`` are added with
:meth:`Grid.assume`; the empty grid is reported as ``None``.
"""

from __future__ import annotations

from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = ["Grid", "echelon"]

Vec = List[int]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def echelon(rows: Iterable[Sequence[int]], n: int) -> List[Vec]:
    """Integer row reduction. The row lattice is preserved exactly."""
    pending = [list(r) for r in rows if any(r)]
    out: List[Vec] = []
    for col in range(n):
        piv = [r for r in pending if r[col]]
        if not piv:
            continue
        rest = [r for r in pending if not r[col]]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            nxt = [p]
            pc = p[col]
            for r in piv[1:]:
                q = r[col] // pc
                r2 = [a - q * b for a, b in zip(r, p)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            piv = nxt
        p = piv[0]
        if p[col] < 0:
            p = [-a for a in p]
        out.append(p)
        pending = rest
    # reduce entries above each pivot
    for i in range(len(out)):
        row = out[i]
        col = next(c for c, a in enumerate(row) if a)
        for j in range(i):
            q = out[j][col] // row[col]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], row)]
    return out


def _reduce_point(x0: Vec, gens: List[Vec]) -> Vec:
    x = list(x0)
    for g in gens:
        col = next(c for c, a in enumerate(g) if a)
        q = x[col] // g[col]
        if q:
            x = [a - q * b for a, b in zip(x, g)]
    return x


def _in_span(w: Vec, gens: List[Vec]) -> bool:
    w = list(w)
    for g in gens:
        col = next(c for c, a in enumerate(g) if a)
        if w[col] % g[col]:
            return False
        q = w[col] // g[col]
        if q:
            w = [a - q * b for a, b in zip(w, g)]
    return not any(w)


class Grid:
    __slots__ = ("vars", "x0", "gens", "_index", "_pairs")

    def __init__(self, vars: Tuple[str, ...] = (), x0: Optional[Vec] = None, gens: Optional[List[Vec]] = None, canonical: bool = False):
        self.vars = tuple(vars)
        n = len(self.vars)
        x0 = list(x0) if x0 is not None else [0] * n
        gens = gens if gens is not None else [[int(i == j) for j in range(n)] for i in range(n)]
        if not canonical:
            gens = echelon(gens, n)
            x0 = _reduce_point(x0, gens)
        self.x0 = x0
        self.gens = gens
        self._index = {v: i for i, v in enumerate(self.vars)}
        self._pairs = None

    # --- structure ---------------------------------------------------------

    def linked_pairs(self) -> frozenset:
        """Pairs of coordinates that some generator moves together.

        Other pairs are independent: the projection onto them is spanned by
        axis vectors.
        """
        if self._pairs is None:
            out = set()
            for row in self.gens:
                nz = [self.vars[i] for i, a in enumerate(row) if a]
                if len(nz) > 1:
                    out.update((a, b) for a in nz for b in nz if a != b)
            self._pairs = frozenset(out)
        return self._pairs

    def __contains__(self, v: str) -> bool:
        return v in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        if set(self.vars) != set(other.vars):
            return False
        o = other.reorder(self.vars)
        return self.x0 == o.x0 and self.gens == o.gens

    def __repr__(self) -> str:
        return f"Grid({self.vars}, x0={self.x0}, gens={self.gens})"

    def reorder(self, order: Sequence[str]) -> "Grid":
        if tuple(order) == self.vars:
            return self
        perm = [self._index[v] for v in order]
        return Grid(tuple(order), [self.x0[i] for i in perm], [[g[i] for i in perm] for g in self.gens])

    def with_vars(self, extra: Iterable[str], fixed: Optional[Dict[str, int]] = None) -> "Grid":
        """Add coordinates: free ones, or pinned to a value when in ``fixed``."""
        fixed = fixed or {}
        new = [v for v in extra if v not in self._index]
        if not new:
            return self
        k = len(new)
        x0 = self.x0 + [fixed.get(v, 0) for v in new]
        gens = [g + [0] * k for g in self.gens]
        n = len(self.vars)
        for i, v in enumerate(new):
            if v not in fixed:
                row = [0] * (n + k)
                row[n + i] = 1
                gens.append(row)
        return Grid(self.vars + tuple(new), x0, gens)

    def drop(self, vs: Iterable[str]) -> "Grid":
        """Existential projection: remove coordinates."""
        gone = {self._index[v] for v in vs if v in self._index}
        if not gone:
            return self
        keep = [i for i in range(len(self.vars)) if i not in gone]
        return Grid(
            tuple(self.vars[i] for i in keep),
            [self.x0[i] for i in keep],
            [[g[i] for i in keep] for g in self.gens],
        )

    def rename(self, mapping: Dict[str, str]) -> "Grid":
        return Grid(tuple(mapping.get(v, v) for v in self.vars), self.x0, self.gens, canonical=True)

    def _vec(self, coefs: Dict[str, int]) -> Vec:
        vec = [0] * len(self.vars)
        for v, a in coefs.items():
            vec[self._index[v]] = a
        return vec

    # --- constraints -------------------------------------------------------

    def assume(self, coefs: Dict[str, int], b: int, m: int = 0) -> Optional["Grid"]:
        """Intersect with ``sum(coefs) = b`` (``m == 0``) or ``= b (mod m)``."""
        g = self.with_vars(coefs)
        a = g._vec(coefs)
        c0 = _dot(a, g.x0)
        nonzero = []
        zero = []
        for row in g.gens:
            c = _dot(a, row)
            (nonzero if c else zero).append((c, row))
        # Euclid on the generator images, by unimodular row operations
        while len(nonzero) > 1:
            nonzero.sort(key=lambda t: abs(t[0]))
            cp, gp = nonzero[0]
            nxt = [(cp, gp)]
            for c, row in nonzero[1:]:
                q = c // cp
                c2 = c - q * cp
                r2 = [x - q * y for x, y in zip(row, gp)]
                (nxt if c2 else zero).append((c2, r2))
            nonzero = nxt
        rhs = b - c0
        rest = [row for _, row in zero]
        if not nonzero:
            ok = rhs == 0 if m == 0 else rhs % m == 0
            return g if ok else None
        cp, h = nonzero[0]
        if cp < 0:
            cp, h = -cp, [-x for x in h]
        if m == 0:
            if rhs % cp:
                return None
            mu = rhs // cp
            x0 = [x + mu * y for x, y in zip(g.x0, h)]
            return Grid(g.vars, x0, rest)
        d = gcd(cp, m)
        if rhs % d:
            return None
        mm = m // d
        mu = 0 if mm == 1 else (rhs // d) * pow(cp // d, -1, mm) % mm
        x0 = [x + mu * y for x, y in zip(g.x0, h)]
        return Grid(g.vars, x0, rest + [[mm * y for y in h]])

    def entails(self, coefs: Dict[str, int], b: int, m: int = 0) -> bool:
        if any(v not in self._index for v in coefs):
            return False
        a = self._vec(coefs)
        diff = b - _dot(a, self.x0)
        if m == 0:
            return diff == 0 and all(_dot(a, g) == 0 for g in self.gens)
        return diff % m == 0 and all(_dot(a, g) % m == 0 for g in self.gens)

    def cong_of(self, v: str) -> Tuple[int, int]:
        """``(m, c)`` with ``v = c (mod m)``; ``m == 0`` pins ``v`` to ``c``."""
        if v not in self._index:
            return 1, 0
        i = self._index[v]
        m = 0
        for g in self.gens:
            m = gcd(m, g[i])
        c = self.x0[i]
        return m, (c % m if m else c)

    def contains(self, point: Dict[str, int]) -> bool:
        w = [point[v] - x for v, x in zip(self.vars, self.x0)]
        return _in_span(w, self.gens)

    # --- lattice operations -------------------------------------------------

    def _align(self, other: "Grid", fixed_self=None, fixed_other=None):
        allv = self.vars + tuple(v for v in other.vars if v not in self._index)
        a = self.with_vars(allv, fixed_self)
        b = other.with_vars(allv, fixed_other).reorder(a.vars)
        return a, b

    def join(self, other: "Grid", fixed_self=None, fixed_other=None) -> "Grid":
        a, b = self._align(other, fixed_self, fixed_other)
        delta = [y - x for x, y in zip(a.x0, b.x0)]
        return Grid(a.vars, a.x0, a.gens + b.gens + [delta])

    def leq(self, other: "Grid", fixed_self=None, fixed_other=None) -> bool:
        a, b = self._align(other, fixed_self, fixed_other)
        if not _in_span([x - y for x, y in zip(a.x0, b.x0)], b.gens):
            return False
        return all(_in_span(g, b.gens) for g in a.gens)

    def meet(self, other: "Grid", fixed_self=None, fixed_other=None) -> Optional["Grid"]:
        a, b = self._align(other, fixed_self, fixed_other)
        n = len(a.vars)
        # rows [g|g] for g in L1 and [g|0] for g in L2: the rows whose first
        # half vanishes span L1 & L2 in their second half
        rows = [g + g for g in a.gens] + [g + [0] * n for g in b.gens]
        ech = echelon(rows, 2 * n)
        delta = [y - x for x, y in zip(a.x0, b.x0)] + [0] * n
        w = delta
        for row in ech:
            col = next(c for c, x in enumerate(row) if x)
            if col >= n:
                break
            if w[col] % row[col]:
                return None
            q = w[col] // row[col]
            if q:
                w = [x - q * y for x, y in zip(w, row)]
        if any(w[:n]):
            return None
        # delta = G1 l + G2 mu and w = -G1 l, so x0_1 - w lies in both grids
        point = [x - y for x, y in zip(a.x0, w[n:])]
        gens = [row[n:] for row in ech if not any(row[:n])]
        return Grid(a.vars, point, gens)
