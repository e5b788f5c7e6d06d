"""Linear constraints over integer points, with Fourier-Motzkin elimination.

A constraint is a coefficient map plus a bound, read as ``sum(a*x) <= b``
or ``sum(a*x) = b``. Coefficients stay integral: every derived constraint is
a nonnegative integer combination, divided by the gcd of its coefficients
with the bound rounded down. That rounding is valid for integer points only,
which is all the analyzer needs.

Elimination is capped: when a step would create too many constraints it
drops the ones mentioning the variable, which is an over-approximation.
A capped feasibility check therefore answers "feasible".
"""

from __future__ import annotations

from math import gcd
from typing import Dict, Iterable, Optional, Tuple

__all__ = [
    "Terms",
    "norm_le",
    "norm_eq",
    "terms_dict",
    "feasible",
    "eliminate",
    "FM_CAP",
]

Terms = Tuple[Tuple[str, int], ...]
Row = Tuple[Dict[str, int], int]

FM_CAP = 400


class _Contradiction(Exception):
    pass


def _gcd_all(vals: Iterable[int]) -> int:
    g = 0
    for v in vals:
        g = gcd(g, v)
    return g


def norm_le(coefs: Dict[str, int], b: int):
    """Normalized ``sum <= b``: ``(terms, bound)``, or True/False when constant."""
    coefs = {v: a for v, a in coefs.items() if a}
    if not coefs:
        return b >= 0
    g = _gcd_all(abs(a) for a in coefs.values())
    terms = tuple(sorted((v, a // g) for v, a in coefs.items()))
    return terms, b // g


def norm_eq(coefs: Dict[str, int], b: int):
    """Normalized ``sum = b`` with a positive leading coefficient."""
    coefs = {v: a for v, a in coefs.items() if a}
    if not coefs:
        return b == 0
    g = _gcd_all(abs(a) for a in coefs.values())
    if b % g:
        return False
    terms = sorted((v, a // g) for v, a in coefs.items())
    b //= g
    if terms[0][1] < 0:
        terms = [(v, -a) for v, a in terms]
        b = -b
    return tuple(terms), b


def terms_dict(terms: Terms) -> Dict[str, int]:
    return dict(terms)


def _combine(c1: Dict[str, int], k1: int, c2: Dict[str, int], k2: int) -> Dict[str, int]:
    out = {v: a * k1 for v, a in c1.items()}
    for v, a in c2.items():
        out[v] = out.get(v, 0) + a * k2
    return {v: a for v, a in out.items() if a}


class _System:
    """Mutable working copy used by elimination."""

    def __init__(self, eqs: Iterable[Row], les: Iterable[Row]):
        self.eqs: Dict[Terms, int] = {}
        self.les: Dict[Terms, int] = {}
        self.exact = True
        for c, b in eqs:
            self.add_eq(c, b)
        for c, b in les:
            self.add_le(c, b)

    def add_le(self, c: Dict[str, int], b: int) -> None:
        n = norm_le(c, b)
        if n is True:
            return
        if n is False:
            raise _Contradiction
        t, bb = n
        old = self.les.get(t)
        if old is None or bb < old:
            self.les[t] = bb

    def add_eq(self, c: Dict[str, int], b: int) -> None:
        n = norm_eq(c, b)
        if n is True:
            return
        if n is False:
            raise _Contradiction
        t, bb = n
        old = self.eqs.get(t)
        if old is not None and old != bb:
            raise _Contradiction
        self.eqs[t] = bb

    def vars(self) -> set:
        out = set()
        for t in self.eqs:
            out.update(v for v, _ in t)
        for t in self.les:
            out.update(v for v, _ in t)
        return out

    def eliminate(self, x: str) -> None:
        best = None
        for t, b in self.eqs.items():
            for v, a in t:
                if v == x and (best is None or abs(a) < abs(best[2])):
                    best = (t, b, a)
        if best is not None:
            self._substitute(x, *best)
        else:
            self._fourier_motzkin(x)

    def _substitute(self, x: str, et: Terms, eb: int, a: int) -> None:
        ec = dict(et)
        s = abs(a)
        sign = 1 if a > 0 else -1
        del self.eqs[et]
        eqs, les = self.eqs, self.les
        self.eqs, self.les = {}, {}
        for t, b in eqs.items():
            c = dict(t)
            k = c.get(x, 0)
            if k:
                self.add_eq(_combine(c, s, ec, -sign * k), s * b - sign * k * eb)
            else:
                self.eqs[t] = b
        for t, b in les.items():
            c = dict(t)
            k = c.get(x, 0)
            if k:
                self.add_le(_combine(c, s, ec, -sign * k), s * b - sign * k * eb)
            else:
                self.add_le(c, b)

    def _fourier_motzkin(self, x: str) -> None:
        pos, neg, rest = [], [], {}
        for t, b in self.les.items():
            c = dict(t)
            k = c.get(x, 0)
            if k > 0:
                pos.append((c, b, k))
            elif k < 0:
                neg.append((c, b, -k))
            else:
                rest[t] = b
        self.les = rest
        if len(pos) * len(neg) + len(rest) > FM_CAP:
            self.exact = False
            return
        for cp, bp, ap in pos:
            for cn, bn, an in neg:
                self.add_le(_combine(cp, an, cn, ap), an * bp + ap * bn)


def _pick(system: _System, pending: set) -> str:
    for t in system.eqs:
        for v, _ in t:
            if v in pending:
                return v
    best, cost = None, None
    for v in sorted(pending):
        p = n = 0
        for t in system.les:
            for w, a in t:
                if w == v:
                    if a > 0:
                        p += 1
                    else:
                        n += 1
        c = p * n - p - n
        if cost is None or c < cost:
            best, cost = v, c
    return best


def eliminate(eqs: Iterable[Row], les: Iterable[Row], xs: Iterable[str]) -> Optional[Tuple[Dict[Terms, int], Dict[Terms, int], bool]]:
    """Project ``xs`` away. Returns ``(eqs, les, exact)`` or None if empty."""
    try:
        system = _System(eqs, les)
        pending = set(xs) & system.vars()
        while pending:
            x = _pick(system, pending)
            pending.discard(x)
            system.eliminate(x)
            pending &= system.vars()
    except _Contradiction:
        return None
    return system.eqs, system.les, system.exact


def feasible(eqs: Iterable[Row], les: Iterable[Row]) -> bool:
    """False only when the system has no integer point."""
    try:
        system = _System(eqs, les)
        pending = system.vars()
        while pending:
            x = _pick(system, pending)
            pending.discard(x)
            system.eliminate(x)
            if not system.exact:
                return True
            pending &= system.vars()
    except _Contradiction:
        return False
    return True
