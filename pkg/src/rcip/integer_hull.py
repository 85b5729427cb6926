"""Lattice points of polyhedra, integer hull vertices and the single-set reverse convex oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import lp
from .convex import ConvexSet, HPolyhedron
from .core import (
    ONE,
    ZERO,
    Vector,
    ceil_frac,
    check_guards,
    floor_frac,
    frac,
)

IntPoint = Tuple[int, ...]


@dataclass(frozen=True)
class LatticePointSet:
    points: Tuple[IntPoint, ...]
    box: Fraction


def _fix_prefix(n: int, prefix: Sequence[int]) -> List[lp.Constraint]:
    out = []
    for i, v in enumerate(prefix):
        e = tuple(ONE if j == i else ZERO for j in range(n))
        out.append(lp.Constraint(e, lp.EQ, Fraction(v)))
    return out


def enumerate_lattice(P: HPolyhedron, box) -> LatticePointSet:
    """Integer points of ``P ∩ [-R, R]^n`` in lexicographic order.

    Each coordinate range is tightened by two LPs over ``P`` with the earlier
    coordinates fixed; the last coordinate is read off exactly.
    """
    R = frac(box)
    n = P.dim
    check_guards(n, R)
    Pb = P.intersect(HPolyhedron.box(n, R))
    cons = Pb.constraints()
    lo_b, hi_b = ceil_frac(-R), floor_frac(R)
    out: List[IntPoint] = []

    def rec(prefix: List[int]):
        k = len(prefix)
        if k == n - 1:
            base = tuple(Fraction(v) for v in prefix) + (ZERO,)
            for lo, hi in Pb.line_ranges(base, k, lo_b, hi_b):
                for t in range(lo, hi + 1):
                    out.append(tuple(prefix) + (t,))
            return
        fixed = cons + _fix_prefix(n, prefix)
        e = tuple(ONE if j == k else ZERO for j in range(n))
        lo = lp.optimize(n, fixed, "min", e)
        if lo.status != lp.OPTIMAL:
            return
        hi = lp.optimize(n, fixed, "max", e)
        for v in range(ceil_frac(lo.value), floor_frac(hi.value) + 1):
            rec(prefix + [v])

    rec([])
    return LatticePointSet(tuple(out), R)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _planar_hull(points: Sequence[IntPoint]) -> List[IntPoint]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[IntPoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[IntPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return sorted(set(hull))


def _line_extremes(points: Sequence[IntPoint]) -> List[IntPoint]:
    """Drop points strictly between two others on a common axis-parallel line (keeps the hull)."""
    pts = list(points)
    n = len(pts[0])
    for axis in range(n):
        lines: Dict[tuple, List[IntPoint]] = {}
        for p in pts:
            lines.setdefault(p[:axis] + p[axis + 1:], []).append(p)
        keep = []
        for group in lines.values():
            lo = min(group, key=lambda p: p[axis])
            hi = max(group, key=lambda p: p[axis])
            keep.append(lo)
            if hi != lo:
                keep.append(hi)
        pts = keep
    return sorted(set(pts))


def in_convex_hull(p: Sequence, others: Sequence[Sequence]) -> bool:
    """Exact LP test of ``p ∈ conv(others)`` with weights λ >= 0, Σλ = 1."""
    if not others:
        return False
    k = len(others)
    n = len(p)
    cons = []
    for i in range(n):
        cons.append(lp.Constraint(tuple(Fraction(o[i]) for o in others), lp.EQ, Fraction(p[i])))
    cons.append(lp.Constraint(tuple(ONE for _ in range(k)), lp.EQ, ONE))
    return lp.solve(lp.LinearProgram(k, cons, nonneg=True)).status == lp.OPTIMAL


def is_hull_vertex(p: IntPoint, candidates: Sequence[IntPoint]) -> bool:
    others = [q for q in candidates if q != p]
    return not in_convex_hull(p, others)


def hull_vertices(pts) -> List[IntPoint]:
    """Extreme points of ``conv(pts)`` in lexicographic order."""
    points = pts.points if isinstance(pts, LatticePointSet) else tuple(tuple(p) for p in pts)
    if not points:
        raise ValueError("integer hull of an empty point set")
    if len(points[0]) == 1:
        return sorted({min(points), max(points)})
    if len(points[0]) == 2:
        return _planar_hull(points)
    cands = _line_extremes(points)
    return [p for p in cands if is_hull_vertex(p, cands)]


def reverse_convex_feasible(P: HPolyhedron, C: ConvexSet, box, open_set: bool = False) -> Optional[IntPoint]:
    """A vertex of the integer hull of ``P`` that avoids ``C``, or None if every lattice point of ``P`` is in ``C``.

    With ``open_set`` the removed set is the interior of ``C``.  Candidates are
    examined in lexicographic order, so the result is the lexicographically
    smallest such vertex.
    """
    pts = enumerate_lattice(P, box).points
    if not pts:
        return None
    removed = C.contains_interior if open_set else C.contains
    outside = [p for p in pts if not removed(tuple(Fraction(v) for v in p))]
    if not outside:
        return None
    cands = _line_extremes(pts)
    cand_set = set(cands)
    for p in outside:
        if p in cand_set and is_hull_vertex(p, cands):
            return p
    raise AssertionError("a lattice point avoids C but no integer hull vertex does")
