"""Full-dimensional cells of a rational hyperplane arrangement.

Cells are found by breadth-first search over sign vectors: starting from the
cell of a generic point, each neighbour is obtained by flipping one sign and
kept when the resulting open region is non-empty (an interior-point LP).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from . import lp
from .convex import HPolyhedron
from .core import ONE, ZERO, Vector, add, dot, frac, integral_row, primitive_direction, scale, vec

LOWER, UPPER = -1, 1  # a.x <= b, a.x >= b


@dataclass(frozen=True)
class Hyperplane:
    a: Vector
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", vec(self.a))
        object.__setattr__(self, "b", frac(self.b))
        if all(x == 0 for x in self.a):
            raise ValueError("hyperplane normal must be non-zero")

    def canonical(self) -> "Hyperplane":
        a, b = primitive_direction(self.a, self.b)
        return Hyperplane(a, b)

    def side_row(self, sign: int) -> Tuple[Vector, Fraction]:
        if sign == LOWER:
            return self.a, self.b
        return tuple(-x for x in self.a), -self.b


class Arrangement:
    """Hyperplanes in R^n, deduplicated up to non-zero scaling, optionally clipped to ``[-R, R]^n``."""

    def __init__(self, hyperplanes: Iterable, dim: int, box: Optional[Fraction] = None, clip: Optional[HPolyhedron] = None):
        self.dim = dim
        self.box = None if box is None else frac(box)
        self.clip = clip
        seen = {}
        for h in hyperplanes:
            if not isinstance(h, Hyperplane):
                h = Hyperplane(*h)
            if len(h.a) != dim:
                raise ValueError("hyperplane dimension does not match the arrangement")
            c = h.canonical()
            seen.setdefault((c.a, c.b), c)
        self.hyperplanes: List[Hyperplane] = list(seen.values())

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def box_rows(self) -> List[Tuple[Vector, Fraction]]:
        rows = [] if self.box is None else HPolyhedron.box(self.dim, self.box).rows()
        if self.clip is not None:
            rows += self.clip.rows()
        return rows

    def region_rows(self, signs: Sequence[int]) -> List[Tuple[Vector, Fraction]]:
        return [h.side_row(s) for h, s in zip(self.hyperplanes, signs)] + self.box_rows()

    def sign_of(self, x, generic: Optional[Vector] = None) -> Tuple[int, ...]:
        out = []
        for h in self.hyperplanes:
            v = dot(h.a, x) - h.b
            if v == 0 and generic is not None:
                v = dot(h.a, generic)
            out.append(UPPER if v > 0 else LOWER)
        return tuple(out)


@dataclass(frozen=True)
class Cell:
    signs: Tuple[int, ...]
    polyhedron: HPolyhedron
    witness: Vector

    def contains(self, x) -> bool:
        return self.polyhedron.contains(vec(x))


def _generic_direction(arr: Arrangement) -> Vector:
    # with M larger than twice every |a_i| of the integral normals, sum a_i M^i never vanishes
    big = 2
    for h in arr.hyperplanes:
        ia, _ = integral_row(h.a, h.b)
        big = max(big, 2 * max(abs(x) for x in ia) + 1)
    return tuple(Fraction(big) ** i for i in range(arr.dim))


def _interior(arr: Arrangement, signs) -> Optional[Vector]:
    rows = arr.region_rows(signs)
    if not rows:
        return tuple(ZERO for _ in range(arr.dim))
    return lp.interior_point([a for a, _ in rows], [b for _, b in rows])


def _as_cell(arr: Arrangement, signs, witness) -> Cell:
    rows = arr.region_rows(signs)
    if not rows:
        # no hyperplanes and no box: the whole space, as a trivially true row
        rows = [(tuple(ZERO for _ in range(arr.dim)), ONE)]
    return Cell(tuple(signs), HPolyhedron.from_rows(rows), witness)


def iter_cells(arr: Arrangement) -> Iterator[Cell]:
    """Yield every full-dimensional cell exactly once, in breadth-first discovery order."""
    rows = arr.box_rows()
    if rows:
        centre = lp.interior_point([a for a, _ in rows], [b for _, b in rows])
        if centre is None:
            return
    else:
        centre = tuple(ZERO for _ in range(arr.dim))
    seed = arr.sign_of(centre, _generic_direction(arr))
    w = _interior(arr, seed)
    if w is None:
        raise AssertionError("generic seed cell has empty interior")
    seen = {seed}
    queue = deque([seed])
    yield _as_cell(arr, seed, w)
    while queue:
        s = queue.popleft()
        for j in range(len(s)):
            t = s[:j] + (-s[j],) + s[j + 1:]
            if t in seen:
                continue
            seen.add(t)
            wt = _interior(arr, t)
            if wt is None:
                continue
            queue.append(t)
            yield _as_cell(arr, t, wt)


def maximal_cells(arr: Arrangement) -> List[Cell]:
    return list(iter_cells(arr))


def brute_force_cells(arr: Arrangement) -> List[Tuple[int, ...]]:
    """All sign vectors with a non-empty open region (2^d interior LPs; for testing)."""
    from itertools import product

    return [s for s in product((LOWER, UPPER), repeat=len(arr)) if _interior(arr, s) is not None]


def locate(cells: Sequence[Cell], x) -> List[int]:
    """Indices of every cell whose closed polyhedron contains ``x``."""
    x = vec(x)
    return [i for i, c in enumerate(cells) if c.contains(x)]


def cell_count_bound(d: int, n: int) -> int:
    """Maximum number of cells of d hyperplanes in R^n, attained in general position."""
    return sum(comb(d, k) for k in range(n + 1))


def in_general_position(arr: Arrangement) -> bool:
    """Every k <= n normals are independent and no n+1 hyperplanes share a point."""
    from itertools import combinations

    from .core import rank, solve_linear

    hs = arr.hyperplanes
    n = arr.dim
    for k in range(1, min(n, len(hs)) + 1):
        for S in combinations(hs, k):
            if rank([h.a for h in S]) < k:
                return False
    for S in combinations(hs, n + 1):
        x, _ = solve_linear([h.a for h in S], [h.b for h in S])
        if x is not None:
            return False
    return True
