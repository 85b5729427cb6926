"""Integer feasibility and linear optimisation over a convex set, plus the brute-force reference verdict."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import lp
from .convex import ConvexSet, Cut, axis_bounds
from .core import (
    ONE,
    ZERO,
    GuardExceeded,
    Vector,
    ceil_frac,
    check_guards,
    dot,
    floor_frac,
    frac,
    vec,
)

IntPoint = Tuple[int, ...]


def guard_points() -> int:
    return int(os.environ.get("RCIP_GUARD_POINTS", 10**6))


@dataclass
class SearchConfig:
    """Knobs of the coordinate branch-and-bound."""

    lp_pruning: bool = True
    cut_rounds: int = 3


def _int_box(C: ConvexSet, R: Optional[Fraction]) -> Optional[List[Tuple[int, int]]]:
    try:
        bds = axis_bounds(C)
    except ValueError:
        if R is None:
            raise
        bds = [(-R, R)] * C.dim
    if bds is None:
        return None
    out = []
    for lo, hi in bds:
        if R is not None:
            lo, hi = max(lo, -R), min(hi, R)
        a, b = ceil_frac(lo), floor_frac(hi)
        if a > b:
            return None
        out.append((a, b))
    return out


class _Search:
    """Depth-first search over coordinates in increasing lexicographic order."""

    def __init__(self, C: ConvexSet, R, config: Optional[SearchConfig]):
        self.C = C
        self.n = C.dim
        self.R = None if R is None else frac(R)
        if self.R is not None:
            check_guards(self.n, self.R)
        self.cfg = config or SearchConfig()
        self.box = _int_box(C, self.R)
        self.rows: List[lp.Constraint] = []
        self.pool: List[Cut] = []
        if self.box is not None:
            n = self.n
            for i, (lo, hi) in enumerate(self.box):
                e = tuple(ONE if j == i else ZERO for j in range(n))
                self.rows.append(lp.Constraint(e, lp.LE, Fraction(hi)))
                self.rows.append(lp.Constraint(e, lp.GE, Fraction(lo)))
            for a, b in C.outer_rows():
                self.rows.append(lp.Constraint(a, lp.LE, b))

    def _relaxation(self, prefix) -> Optional[List[lp.Constraint]]:
        n = self.n
        fixed = list(self.rows) + [lp.Constraint(c.a, lp.LE, c.b) for c in self.pool]
        for i, v in enumerate(prefix):
            e = tuple(ONE if j == i else ZERO for j in range(n))
            fixed.append(lp.Constraint(e, lp.EQ, Fraction(v)))
        for _ in range(self.cfg.cut_rounds):
            x = lp.feasible_point(n, fixed)
            if x is None:
                return None
            try:
                cut = self.C.separate(x)
            except ValueError:
                cut = None
            if cut is None:
                break
            self.pool.append(cut)
            fixed.append(lp.Constraint(cut.a, lp.LE, cut.b))
        return fixed

    def coordinate_range(self, prefix) -> Optional[Tuple[int, int]]:
        k = len(prefix)
        lo, hi = self.box[k]
        if self.cfg.lp_pruning and self.n - k >= 2 and k > 0:
            fixed = self._relaxation(prefix)
            if fixed is None:
                return None
            e = tuple(ONE if j == k else ZERO for j in range(self.n))
            r_lo = lp.optimize(self.n, fixed, "min", e)
            if r_lo.status == lp.INFEASIBLE:
                return None
            r_hi = lp.optimize(self.n, fixed, "max", e)
            lo, hi = max(lo, ceil_frac(r_lo.value)), min(hi, floor_frac(r_hi.value))
        return (lo, hi) if lo <= hi else None

    def leaf_ranges(self, prefix) -> List[Tuple[int, int]]:
        k = self.n - 1
        base = tuple(Fraction(v) for v in prefix) + (ZERO,)
        lo, hi = self.box[k]
        return self.C.line_ranges(base, k, lo, hi, False)

    def prefixes(self, prefix=()):
        """Yield every prefix of length n-1 that survives pruning, in lexicographic order."""
        if self.box is None:
            return
        if len(prefix) == self.n - 1:
            yield prefix
            return
        rng = self.coordinate_range(prefix)
        if rng is None:
            return
        for v in range(rng[0], rng[1] + 1):
            yield from self.prefixes(prefix + (v,))


def convex_int_feasible(C: ConvexSet, box=None, config: Optional[SearchConfig] = None) -> Optional[IntPoint]:
    """The lexicographically smallest integer point of ``C`` (closed), or None."""
    s = _Search(C, box, config)
    for prefix in s.prefixes():
        rs = s.leaf_ranges(prefix)
        if rs:
            return prefix + (rs[0][0],)
    return None


def convex_int_optimize(
    C: ConvexSet, direction, sense: str = "max", box=None, config: Optional[SearchConfig] = None
) -> Optional[Tuple[IntPoint, Fraction]]:
    """Exact optimum of ``direction . x`` over the integer points of ``C``; ties go to the lexicographically smaller point."""
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    d = vec(direction)
    sgn = 1 if sense == "max" else -1
    s = _Search(C, box, config)
    best = None
    last = d[-1] * sgn
    for prefix in s.prefixes():
        base = sum((d[i] * v for i, v in enumerate(prefix)), ZERO)
        for lo, hi in s.leaf_ranges(prefix):
            t = hi if last > 0 else lo
            val = sgn * (base + d[-1] * t)
            if best is None or val > best[0]:
                best = (val, prefix + (t,))
    if best is None:
        return None
    return best[1], sgn * best[0]


def _box_points(n: int, R) -> itertools.product:
    R = frac(R)
    lo, hi = ceil_frac(-R), floor_frac(R)
    total = (hi - lo + 1) ** n if hi >= lo else 0
    if total > guard_points():
        raise GuardExceeded(f"box scan of {total} points exceeds the guard {guard_points()}")
    return itertools.product(range(lo, hi + 1), repeat=n)


def brute_force_points(
    domains: Sequence[ConvexSet], removed: Sequence[ConvexSet], n: int, R, open_set: bool = True
) -> List[IntPoint]:
    """Every integer point of the box in some domain and in no removed set, lexicographically."""
    out = []
    for p in _box_points(n, R):
        if _feasible(p, domains, removed, open_set):
            out.append(p)
    return out


def _feasible(p, domains, removed, open_set) -> bool:
    x = tuple(Fraction(v) for v in p)
    if not any(K.contains(x) for K in domains):
        return False
    if open_set:
        return not any(C.contains_interior(x) for C in removed)
    return not any(C.contains(x) for C in removed)


def brute_force_verdict(
    domains: Sequence[ConvexSet], removed: Sequence[ConvexSet], n: int, R, open_set: bool = True
) -> Optional[IntPoint]:
    """Lexicographically smallest feasible integer point found by scanning the whole box."""
    for p in _box_points(n, R):
        if _feasible(p, domains, removed, open_set):
            return p
    return None
