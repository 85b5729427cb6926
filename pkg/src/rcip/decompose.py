"""Polyhedral decompositions that turn a reverse convex problem into convex and single-removal pieces.

Two engines:

* :func:`decompose_removing_polyhedra` handles removed polyhedra.  Each one is
  enlarged by half a unit on integral rows, so no lattice point sits on a cell
  boundary, and the cells of the resulting arrangement that avoid every
  enlarged polyhedron are kept.
* :func:`decompose_bhc_integer` handles curved removed sets with a boundary
  hyperplane cover.  On every cell of the cover arrangement the members that
  meet the cell are grouped into connected components of their overlap graph;
  each component's union is convex there.  Components are then pulled apart by
  strict integer separating hyperplanes, so every emitted piece carries at
  most one convex removed part.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import lp
from .arrangement import LOWER, UPPER, Arrangement, Hyperplane, iter_cells, maximal_cells
from .bhc import DISJOINT, TANGENT, BoundaryCover, classify_sphere_intersection
from .convex import (
    Ball,
    ConvexSet,
    HPolyhedron,
    Intersection,
    UnionConvex,
    _polyhedral_and_curved,
    quadratic_min_over_polytope,
    strict_common_point,
)
from .core import ONE, ZERO, GuardExceeded, Vector, ceil_frac, dot, frac, integral_row
from .separation import continuous_weak_separation, strict_integer_separation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Piece:
    """A polyhedron ``P_s`` and the convex removed part ``K_s`` on it (None when nothing is removed).

    ``certified`` is False only when two overlap-graph components could not
    be separated and had to be merged; such pieces are solved by enumeration.
    """

    polyhedron: HPolyhedron
    convex_part: Optional[UnionConvex]
    members: Tuple[int, ...]
    cell: Tuple[int, ...]
    component: int
    region: Tuple[int, ...] = ()
    certified: bool = True


@dataclass
class Subdivision:
    convex_pieces: List[Piece] = field(default_factory=list)
    concave_pieces: List[Piece] = field(default_factory=list)
    box: Fraction = ZERO

    @property
    def pieces(self) -> List[Piece]:
        return self.convex_pieces + self.concave_pieces


# -- removing polyhedra ------------------------------------------------------


def enlarged_rows(Q: HPolyhedron, open_set: bool) -> Optional[List[Tuple[Vector, Fraction]]]:
    """Integral rows of ``Q`` shifted by half a unit; None when the removed set has no lattice points at all.

    Open semantics removes lattice points with ``a.x <= b - 1`` on every
    integral row, closed semantics those with ``a.x <= b``; the returned rows
    use ``b - 1/2`` and ``b + 1/2`` respectively.
    """
    out = []
    half = Fraction(1, 2)
    for a, b in Q.rows():
        if all(v == 0 for v in a):
            if (open_set and b <= 0) or (not open_set and b < 0):
                return None
            continue
        ia, ib = integral_row(a, b)
        shift = -half if open_set else half
        out.append((tuple(Fraction(v) for v in ia), Fraction(ib) + shift))
    return out


def _fixed_and_crossing(hyperplanes: Sequence[Hyperplane], region_rows):
    """Split hyperplanes into those crossing the region's interior and those with a constant side."""
    A = [a for a, _ in region_rows]
    b = [r for _, r in region_rows]
    crossing, fixed = [], {}
    for k, h in enumerate(hyperplanes):
        lo = lp.interior_point(A + [h.a], b + [h.b])
        hi = lp.interior_point(A + [tuple(-v for v in h.a)], b + [-h.b])
        if lo is not None and hi is not None:
            crossing.append(k)
        else:
            fixed[k] = LOWER if lo is not None else UPPER
    return crossing, fixed


def _full_signs(arr_hs, all_hs, crossing, fixed, signs):
    pos = {primitive: i for i, primitive in enumerate((h.a, h.b) for h in arr_hs)}
    out = []
    for k, h in enumerate(all_hs):
        if k in fixed:
            out.append(fixed[k])
        else:
            c = h.canonical()
            s = signs[pos[(c.a, c.b)]]
            # the arrangement stores canonical planes; flip when h points the other way
            out.append(s if c.a == h.a and c.b == h.b else _orient(h, c, s))
    return tuple(out)


def _orient(h: Hyperplane, c: Hyperplane, s: int) -> int:
    k = next(x for x in h.a if x != 0)
    kc = next(x for x in c.a if x != 0)
    return s if (k > 0) == (kc > 0) else -s


def _region_rows(n: int, box, clip: Optional[HPolyhedron]):
    rows = HPolyhedron.box(n, box).rows()
    if clip is not None:
        rows += clip.rows()
    return rows


def decompose_removing_polyhedra(
    K: Optional[ConvexSet], Qs: Sequence[HPolyhedron], box, open_set: bool = True, clip: Optional[HPolyhedron] = None
) -> List[HPolyhedron]:
    return list(iter_removing_polyhedra(K, Qs, box, open_set, clip))


def iter_removing_polyhedra(
    K: Optional[ConvexSet], Qs: Sequence[HPolyhedron], box, open_set: bool = True, clip: Optional[HPolyhedron] = None
) -> Iterator[HPolyhedron]:
    """Cells ``T_s`` with ``(K \\ ∪Q_i) ∩ Z^n = ∪ (K ∩ T_s) ∩ Z^n`` inside ``[-R, R]^n``.

    ``clip`` optionally restricts the cells to a polyhedron known to contain
    ``K`` (hyperplanes that miss it are then resolved without branching).
    """
    box = frac(box)
    if K is not None:
        n = K.dim
    elif Qs:
        n = Qs[0].dim
    elif clip is not None:
        n = clip.dim
    else:
        raise ValueError("cannot infer the dimension")
    groups: List[List[Tuple[Vector, Fraction]]] = []
    for Q in Qs:
        rows = enlarged_rows(Q, open_set)
        if rows is not None:
            groups.append(rows)
    hyperplanes = [Hyperplane(a, b) for rows in groups for a, b in rows]
    region = _region_rows(n, box, clip)
    if lp.interior_point([a for a, _ in region], [b for _, b in region]) is None:
        return
    crossing, fixed = _fixed_and_crossing(hyperplanes, region)
    arr = Arrangement([hyperplanes[k] for k in crossing], n, box, clip)
    for cell in iter_cells(arr):
        signs = _full_signs(arr.hyperplanes, hyperplanes, crossing, fixed, cell.signs)
        k = 0
        keep = True
        for rows in groups:
            if not any(signs[k + r] == UPPER for r in range(len(rows))):
                keep = False
                break
            k += len(rows)
        if keep:
            yield cell.polyhedron


# -- BHC decomposition -------------------------------------------------------


def meets_interior(C: ConvexSet, P: HPolyhedron) -> bool:
    """Whether ``int(C)`` meets the full-dimensional polytope ``P``."""
    polys, curved = _polyhedral_and_curved(C)
    return strict_common_point([P] + polys, curved) is not None


def _affine_difference(X, Y):
    """``(a, c)`` with ``t q_X - q_Y = a.x + c`` for some ``t > 0``, when the quadratic parts are proportional."""
    if not (hasattr(X, "quadratic") and hasattr(Y, "quadratic")):
        return None
    QX, bX, cX = X.quadratic()
    QY, bY, cY = Y.quadratic()
    t = None
    for rx, ry in zip(QX, QY):
        for u, v in zip(rx, ry):
            if u == 0 and v == 0:
                continue
            if u == 0 or (t is not None and v / u != t):
                return None
            t = v / u
    if t is None or t <= 0:
        return None
    return tuple(t * u - v for u, v in zip(bX, bY)), t * cX - cY


def overlap_in_cell(X: ConvexSet, Y: ConvexSet, P: HPolyhedron) -> bool:
    """Whether ``int(X) ∩ int(Y)`` meets ``P``; both are already known to meet ``P``.

    Exact for ball pairs, pairs with proportional quadratic parts whose affine
    difference keeps one sign on ``P``, and pairs with at most one curved set.
    Other pairs fall back to segment sampling, which can only miss overlaps.
    """
    if isinstance(X, Ball) and isinstance(Y, Ball):
        if classify_sphere_intersection(X, Y) in (DISJOINT,) or (
            classify_sphere_intersection(X, Y) == TANGENT
            and (X.radius + Y.radius) ** 2 == sum((u - v) ** 2 for u, v in zip(X.center, Y.center))
        ):
            return False
    diff = _affine_difference(X, Y)
    if diff is not None:
        a, c = diff
        cons = P.constraints()
        if all(v == 0 for v in a):
            return True
        lo = lp.optimize(P.dim, cons, "min", a)
        hi = lp.optimize(P.dim, cons, "max", a)
        if hi.value + c <= 0 or lo.value + c >= 0:
            # one interior contains the other on P, and both meet P
            return True
    px, cx = _polyhedral_and_curved(X)
    py, cy = _polyhedral_and_curved(Y)
    return strict_common_point([P] + px + py, cx + cy) is not None


def _components(nodes: Sequence[int], edges) -> List[List[int]]:
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: Dict[int, List[int]] = {}
    for v in nodes:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def intersection_graph(P: HPolyhedron, members: Sequence[ConvexSet], active: Sequence[int]):
    return [(i, j) for i, j in combinations(active, 2) if overlap_in_cell(members[i], members[j], P)]


def component_union(P: HPolyhedron, members: Sequence[ConvexSet], component: Sequence[int], tag: str) -> UnionConvex:
    return UnionConvex(tuple(members[i] for i in component), P, f"{tag} component {list(component)}")


def _separate_components(P, members, comps, box, tag):
    """Pairwise integral separators; merges components that cannot be separated."""
    while True:
        unions = [component_union(P, members, c, tag) for c in comps]
        seps = {}
        failed = None
        for u, v in combinations(range(len(comps)), 2):
            sep = None
            if len(comps[u]) == 1 and len(comps[v]) == 1:
                cont = continuous_weak_separation(members[comps[u][0]], members[comps[v][0]])
                if cont is not None:
                    a, b = cont
                    ia, ib = integral_row(a, b)
                    sep = (ia, ceil_frac(Fraction(ib)) - 1)
            if sep is None:
                sep = strict_integer_separation(unions[u], unions[v], box)
            if sep is None:
                failed = (u, v)
                break
            seps[(u, v)] = sep
        if failed is None:
            return comps, seps, True
        u, v = failed
        log.warning("%s: components %s and %s could not be separated; merging them", tag, comps[u], comps[v])
        merged = sorted(comps[u] + comps[v])
        comps = sorted([c for k, c in enumerate(comps) if k not in (u, v)] + [merged])
        if len(comps) == 1:
            return comps, {}, False


def piece_guard(m: int, d: int, n: int) -> int:
    return (m * m * (d + 2 * n)) ** n * 4 ** n


def decompose_bhc_integer(
    members: Sequence[ConvexSet],
    cover: BoundaryCover,
    box,
    clip: Optional[HPolyhedron] = None,
) -> List[Piece]:
    """Pieces ``(P_s, K_s)`` with ``Z^n ∩ box \\ ∪int(C_i) = ∪ (P_s \\ K_s) ∩ Z^n``."""
    box = frac(box)
    if not members:
        n = clip.dim if clip is not None else None
        if n is None:
            raise ValueError("cannot infer the dimension")
    else:
        n = members[0].dim
    region = _region_rows(n, box, clip)
    if lp.interior_point([a for a, _ in region], [b for _, b in region]) is None:
        return []
    hyperplanes = list(cover.hyperplanes) if cover is not None else []
    crossing, fixed = _fixed_and_crossing(hyperplanes, region)
    arr = Arrangement([hyperplanes[k] for k in crossing], n, box, clip)
    d = len(arr.hyperplanes)
    limit = piece_guard(max(len(members), 1), d, n)
    pieces: List[Piece] = []
    for cell in maximal_cells(arr):
        P = cell.polyhedron
        signs = cell.signs
        tag = f"cell {''.join('+' if s == UPPER else '-' for s in signs)}"
        active = [i for i, C in enumerate(members) if meets_interior(C, P)]
        if not active:
            pieces.append(Piece(P, None, (), signs, -1))
            continue
        comps = _components(active, intersection_graph(P, members, active))
        if len(comps) == 1:
            pieces.append(Piece(P, component_union(P, members, comps[0], tag), tuple(comps[0]), signs, 0))
            continue
        comps, seps, certified = _separate_components(P, members, comps, box, tag)
        if len(comps) == 1:
            pieces.append(Piece(P, component_union(P, members, comps[0], tag), tuple(comps[0]), signs, 0, (), certified))
            continue
        pieces.extend(_split_cell(P, members, comps, seps, signs, tag))
        if len(pieces) > limit:
            raise GuardExceeded(f"decomposition produced more than {limit} pieces")
    pieces.sort(key=lambda p: (p.cell, p.component, p.region))
    return pieces


def _split_cell(P, members, comps, seps, signs, tag) -> List[Piece]:
    pairs = sorted(seps)
    out = []

    def rows_for(choice):
        rows = []
        for (u, v), side in zip(pairs, choice):
            a, beta = seps[(u, v)]
            a = tuple(Fraction(x) for x in a)
            if side == LOWER:
                rows.append((a, Fraction(beta)))
            else:
                rows.append((tuple(-x for x in a), -Fraction(beta) - 1))
        return rows

    def rec(choice):
        rows = P.rows() + rows_for(choice)
        cons = [lp.Constraint(a, lp.LE, b) for a, b in rows]
        if lp.feasible_point(P.dim, cons) is None:
            return
        if len(choice) < len(pairs):
            rec(choice + (LOWER,))
            rec(choice + (UPPER,))
            return
        region = HPolyhedron.from_rows(rows)
        match = -1
        for k in range(len(comps)):
            ok = True
            for (u, v), side in zip(pairs, choice):
                if (u == k and side != LOWER) or (v == k and side != UPPER):
                    ok = False
                    break
            if ok:
                match = k
                break
        if match < 0:
            out.append(Piece(region, None, (), signs, -1, choice))
        else:
            K = component_union(region, members, comps[match], tag)
            out.append(Piece(region, K, tuple(comps[match]), signs, match, choice))

    rec(())
    return out


def to_subdivision(pieces: Sequence[Piece], domain: HPolyhedron, box) -> Subdivision:
    """Intersect every piece with the domain polytope and sort pieces into convex and concave ones."""
    sub = Subdivision(box=frac(box))
    for p in pieces:
        Q = p.polyhedron.intersect(domain)
        if lp.feasible_point(Q.dim, Q.constraints()) is None:
            continue
        if p.convex_part is None:
            sub.convex_pieces.append(Piece(Q, None, (), p.cell, -1, p.region, p.certified))
        else:
            K = UnionConvex(p.convex_part.members, Q, p.convex_part.certificate)
            sub.concave_pieces.append(Piece(Q, K, p.members, p.cell, p.component, p.region, p.certified))
    return sub
