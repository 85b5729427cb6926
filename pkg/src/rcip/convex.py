"""Convex set descriptions and their oracles.

Supported classes: :class:`Ball`, :class:`ConvexQuadratic`, :class:`HPolyhedron`,
:class:`Intersection` and :class:`UnionConvex` (a certified-convex union of
member interiors restricted to a polyhedral cell, only built by
:mod:`rcip.decompose`).  :class:`NonconvexQuadratic` supports membership only and
exists so that hard-case corpus instances can be fed to the brute-force oracle.

Every set answers closed membership (``contains``) and interior membership
(``contains_interior``) exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import lp
from .core import (
    ONE,
    ZERO,
    Matrix,
    Vector,
    ceil_frac,
    dot,
    floor_frac,
    frac,
    integral_row,
    is_pd,
    is_psd,
    lerp,
    mat,
    mat_vec,
    norm_sq,
    solve_linear,
    sqrt_bounds,
    sub,
    vec,
)

log = logging.getLogger(__name__)

Range = Tuple[int, int]


@dataclass(frozen=True)
class Cut:
    """The valid inequality ``a . y <= b`` returned by a separation oracle."""

    a: Vector
    b: Fraction

    def violated_by(self, x) -> bool:
        return dot(self.a, x) > self.b


def _normalized_cut(a, b) -> Cut:
    if all(x == 0 for x in a):
        return Cut(tuple(a), frac(b))
    ia, ib = integral_row(a, b)
    return Cut(tuple(Fraction(x) for x in ia), Fraction(ib))


def _check_dim(C, x):
    if len(x) != C.dim:
        raise ValueError(f"dimension mismatch: set has dim {C.dim}, point has {len(x)}")


class ConvexSet:
    """Common interface; concrete classes are frozen dataclasses."""

    name: str = ""
    inner_radius: Optional[Fraction] = None
    curved = True

    def contains(self, x) -> bool:
        raise NotImplementedError

    def contains_interior(self, x) -> bool:
        raise NotImplementedError

    def separate(self, x) -> Optional[Cut]:
        raise NotImplementedError

    def bounds(self, d) -> Optional[Tuple[Fraction, Fraction]]:
        raise NotImplementedError

    def line_ranges(self, base, axis, lo, hi, strict=False) -> List[Range]:
        raise NotImplementedError

    def outer_rows(self) -> List[Tuple[Vector, Fraction]]:
        """Linear inequalities valid for the set (used in LP relaxations)."""
        return []


# -- one dimensional helpers -------------------------------------------------


def _intersect_ranges(xs: List[Range], ys: List[Range]) -> List[Range]:
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def _union_ranges(groups: List[List[Range]]) -> List[Range]:
    items = sorted(r for g in groups for r in g)
    out: List[Range] = []
    for lo, hi in items:
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _linear_range(coef: Fraction, slack: Fraction, lo: int, hi: int, strict: bool) -> List[Range]:
    """Integers t in [lo, hi] with ``coef * t <= slack`` (``<`` when strict)."""
    if coef == 0:
        ok = slack > 0 if strict else slack >= 0
        return [(lo, hi)] if ok else []
    q = slack / coef
    if coef > 0:
        top = ceil_frac(q) - 1 if strict else floor_frac(q)
        hi = min(hi, top)
    else:
        bot = floor_frac(q) + 1 if strict else ceil_frac(q)
        lo = max(lo, bot)
    return [(lo, hi)] if lo <= hi else []


def quadratic_int_range(a: Fraction, b: Fraction, c: Fraction, lo: int, hi: int, strict: bool = False) -> List[Range]:
    """Integers t in [lo, hi] with ``a t^2 + b t + c <= 0`` (``< 0`` when strict); needs a >= 0."""
    if a < 0:
        raise ValueError("restriction of a convex quadratic must have a >= 0")
    if a == 0:
        return _linear_range(b, -c, lo, hi, strict)

    def ok(t):
        v = (a * t + b) * t + c
        return v < 0 if strict else v <= 0

    disc = b * b - 4 * a * c
    if disc < 0 or (strict and disc == 0):
        return []
    _, s_hi = sqrt_bounds(disc, 24)
    two_a = 2 * a
    vertex = -b / two_a
    left = ceil_frac((-b - s_hi) / two_a)
    right = floor_frac((-b + s_hi) / two_a)
    left = max(left, lo)
    right = min(right, hi)
    # the approximations are outer bounds; walk inwards until feasible
    while left <= right and not ok(left):
        if left > vertex:
            return []
        left += 1
    while right >= left and not ok(right):
        right -= 1
    return [(left, right)] if left <= right else []


# -- concrete classes --------------------------------------------------------


@dataclass(frozen=True)
class HPolyhedron(ConvexSet):
    """The set ``{x : A x <= b}``."""

    A: Matrix
    b: Vector
    name: str = ""
    curved = False

    def __post_init__(self):
        object.__setattr__(self, "A", mat(self.A))
        object.__setattr__(self, "b", vec(self.b))
        if len(self.A) != len(self.b):
            raise ValueError("A rows must equal b dimension")
        if not self.A:
            raise ValueError("an HPolyhedron needs at least one row to fix its dimension")

    @property
    def dim(self) -> int:
        return len(self.A[0])

    @classmethod
    def box(cls, n: int, R, name: str = "") -> "HPolyhedron":
        R = frac(R)
        A, b = [], []
        for i in range(n):
            e = [ZERO] * n
            e[i] = ONE
            A.append(tuple(e))
            b.append(R)
            A.append(tuple(-x for x in e))
            b.append(R)
        return cls(tuple(A), tuple(b), name)

    @classmethod
    def from_rows(cls, rows, name: str = "") -> "HPolyhedron":
        rows = list(rows)
        return cls(tuple(vec(a) for a, _ in rows), tuple(frac(b) for _, b in rows), name)

    def rows(self) -> List[Tuple[Vector, Fraction]]:
        return list(zip(self.A, self.b))

    def constraints(self) -> List[lp.Constraint]:
        return [lp.Constraint(a, lp.LE, b) for a, b in zip(self.A, self.b)]

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        return HPolyhedron(self.A + other.A, self.b + other.b, self.name)

    def contains(self, x) -> bool:
        _check_dim(self, x)
        return all(dot(a, x) <= b for a, b in zip(self.A, self.b))

    def contains_interior(self, x) -> bool:
        _check_dim(self, x)
        return all(dot(a, x) < b for a, b in zip(self.A, self.b))

    def separate(self, x) -> Optional[Cut]:
        _check_dim(self, x)
        for a, b in zip(self.A, self.b):
            if dot(a, x) > b:
                return _normalized_cut(a, b)
        return None

    def bounds(self, d):
        d = vec(d)
        lo = lp.optimize(self.dim, self.constraints(), "min", d)
        if lo.status == lp.INFEASIBLE:
            return None
        hi = lp.optimize(self.dim, self.constraints(), "max", d)
        if lo.status == lp.UNBOUNDED or hi.status == lp.UNBOUNDED:
            raise ValueError("polyhedron is unbounded in the requested direction")
        return lo.value, hi.value

    def line_ranges(self, base, axis, lo, hi, strict=False):
        out = [(lo, hi)]
        for a, b in zip(self.A, self.b):
            slack = b - (dot(a, base) - a[axis] * base[axis])
            r = _linear_range(a[axis], slack, out[0][0], out[0][1], strict)
            if not r:
                return []
            out = r
        return out

    def outer_rows(self):
        return self.rows()

    def interior_point(self) -> Optional[Vector]:
        return lp.interior_point(self.A, self.b)

    def is_empty(self) -> bool:
        return lp.feasible_point(self.dim, self.constraints()) is None


class _QuadraticMixin:
    """Shared behaviour of sets ``{x : x^T Q x + b^T x + c <= 0}``."""

    def quadratic(self) -> Tuple[Matrix, Vector, Fraction]:
        raise NotImplementedError

    def value(self, x) -> Fraction:
        Q, b, c = self.quadratic()
        return dot(x, mat_vec(Q, x)) + dot(b, x) + c

    def contains(self, x) -> bool:
        _check_dim(self, x)
        return self.value(x) <= 0

    def contains_interior(self, x) -> bool:
        _check_dim(self, x)
        return self.value(x) < 0

    def gradient(self, x) -> Vector:
        Q, b, _ = self.quadratic()
        Qx = mat_vec(Q, x)
        return tuple(2 * u + v for u, v in zip(Qx, b))

    def line_ranges(self, base, axis, lo, hi, strict=False):
        Q, b, _ = self.quadratic()
        base = tuple(base[:axis]) + (ZERO,) + tuple(base[axis + 1:])
        a2 = Q[axis][axis]
        a1 = 2 * dot(Q[axis], base) + b[axis]
        a0 = self.value(base)
        return quadratic_int_range(a2, a1, a0, lo, hi, strict)

    def minimizer(self) -> Optional[Vector]:
        """Unconstrained minimiser (None when the quadratic is unbounded below)."""
        Q, b, _ = self.quadratic()
        x, _ = solve_linear([[2 * q for q in row] for row in Q], [-v for v in b])
        return x


@dataclass(frozen=True)
class Ball(_QuadraticMixin, ConvexSet):
    """Euclidean ball ``{x : ||x - center|| <= radius}``."""

    center: Vector
    radius: Fraction
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "center", vec(self.center))
        object.__setattr__(self, "radius", frac(self.radius))
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def inner_radius(self):
        return self.radius

    def quadratic(self):
        n = self.dim
        Q = tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))
        b = tuple(-2 * c for c in self.center)
        return Q, b, norm_sq(self.center) - self.radius ** 2

    def value(self, x) -> Fraction:
        return norm_sq(sub(x, self.center)) - self.radius ** 2

    def separate(self, x) -> Optional[Cut]:
        _check_dim(self, x)
        a = sub(x, self.center)
        nsq = norm_sq(a)
        if nsq <= self.radius ** 2:
            return None
        # need r*||a|| <= rho < ||a||^2 with rho rational
        bits = 8
        while True:
            _, hi = sqrt_bounds(nsq, bits)
            if self.radius * hi < nsq:
                break
            bits *= 2
        return _normalized_cut(a, dot(a, self.center) + self.radius * hi)

    def bounds(self, d):
        d = vec(d)
        _, hi = sqrt_bounds(norm_sq(d))
        mid = dot(d, self.center)
        return mid - self.radius * hi, mid + self.radius * hi

    def minimizer(self):
        return self.center


@dataclass(frozen=True)
class ConvexQuadratic(_QuadraticMixin, ConvexSet):
    """``{x : x^T Q x + b^T x + c <= 0}`` with ``Q`` symmetric positive semidefinite."""

    Q: Matrix
    b: Vector
    c: Fraction
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "Q", mat(self.Q))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "c", frac(self.c))
        n = len(self.b)
        if len(self.Q) != n or any(len(r) != n for r in self.Q):
            raise ValueError("Q must be n x n with n = len(b)")
        if not is_psd(self.Q):
            raise ValueError("Q is not positive semidefinite; the set would not be convex")

    @property
    def dim(self) -> int:
        return len(self.b)

    def quadratic(self):
        return self.Q, self.b, self.c

    def separate(self, x) -> Optional[Cut]:
        _check_dim(self, x)
        qx = self.value(x)
        if qx <= 0:
            return None
        a = self.gradient(x)
        if all(v == 0 for v in a):
            # x minimises q with q(x) > 0: the set is empty
            return Cut(a, -ONE)
        return _normalized_cut(a, dot(a, x) - qx)

    def bounds(self, d):
        if not is_pd(self.Q):
            raise ValueError("quadratic set is not bounded (Q is singular)")
        x0 = self.minimizer()
        m = self.value(x0)
        if m > 0:
            return None
        d = vec(d)
        y, _ = solve_linear(self.Q, d)
        _, hi = sqrt_bounds(-m * dot(d, y))
        mid = dot(d, x0)
        return mid - hi, mid + hi


@dataclass(frozen=True)
class NonconvexQuadratic(_QuadraticMixin, ConvexSet):
    """Membership-only quadratic region (indefinite ``Q``); accepted by the brute-force oracle only."""

    Q: Matrix
    b: Vector
    c: Fraction
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "Q", mat(self.Q))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "c", frac(self.c))

    @property
    def dim(self) -> int:
        return len(self.b)

    def quadratic(self):
        return self.Q, self.b, self.c

    def separate(self, x):
        raise TypeError("non-convex region has no separation oracle")

    def bounds(self, d):
        raise TypeError("non-convex region has no bounds oracle")

    def line_ranges(self, *args, **kwargs):
        raise TypeError("non-convex region is not supported by the convex oracles")


@dataclass(frozen=True)
class Intersection(ConvexSet):
    members: Tuple[ConvexSet, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ValueError("empty intersection")
        if len({m.dim for m in self.members}) != 1:
            raise ValueError("members have different dimensions")

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def curved(self):
        return any(m.curved for m in self.members)

    def contains(self, x):
        return all(m.contains(x) for m in self.members)

    def contains_interior(self, x):
        return all(m.contains_interior(x) for m in self.members)

    def separate(self, x):
        for m in self.members:
            cut = m.separate(x)
            if cut is not None:
                return cut
        return None

    def bounds(self, d):
        lo, hi = None, None
        rows = self.outer_rows()
        for m in self.members:
            if isinstance(m, HPolyhedron):
                continue
            try:
                bd = m.bounds(d)
            except ValueError:
                continue
            if bd is None:
                return None
            lo = bd[0] if lo is None else max(lo, bd[0])
            hi = bd[1] if hi is None else min(hi, bd[1])
        if rows:
            bd = HPolyhedron.from_rows(rows).bounds(d)
            if bd is None:
                return None
            lo = bd[0] if lo is None else max(lo, bd[0])
            hi = bd[1] if hi is None else min(hi, bd[1])
        if lo is None:
            raise ValueError("intersection has no bounded member")
        if lo > hi:
            return None
        return lo, hi

    def line_ranges(self, base, axis, lo, hi, strict=False):
        out = [(lo, hi)]
        for m in self.members:
            out = _intersect_ranges(out, m.line_ranges(base, axis, lo, hi, strict))
            if not out:
                break
        return out

    def outer_rows(self):
        return [r for m in self.members for r in m.outer_rows()]


@dataclass(frozen=True)
class UnionConvex(ConvexSet):
    """``cell ∩ (int C_1 ∪ ... ∪ int C_k)``, certified convex by the decomposition.

    Only :mod:`rcip.decompose` constructs these; ``certificate`` records the
    cell and component the union came from.
    """

    members: Tuple[ConvexSet, ...]
    cell: HPolyhedron
    certificate: str
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.certificate:
            raise ValueError("UnionConvex requires a certificate from the decomposition")

    @property
    def dim(self) -> int:
        return self.cell.dim

    def contains(self, x):
        return self.cell.contains(x) and any(m.contains_interior(x) for m in self.members)

    def contains_interior(self, x):
        return self.cell.contains_interior(x) and any(m.contains_interior(x) for m in self.members)

    def separate(self, x):
        cut = self.cell.separate(x)
        if cut is not None or self.contains(x):
            return cut
        raise ValueError("no exact separation oracle for a certified union at this point")

    def bounds(self, d):
        bd = self.cell.bounds(d)
        if bd is None:
            return None
        lo, hi = None, None
        for m in self.members:
            mb = m.bounds(d)
            if mb is None:
                continue
            lo = mb[0] if lo is None else min(lo, mb[0])
            hi = mb[1] if hi is None else max(hi, mb[1])
        if lo is None:
            return None
        lo, hi = max(lo, bd[0]), min(hi, bd[1])
        return (lo, hi) if lo <= hi else None

    def line_ranges(self, base, axis, lo, hi, strict=False):
        cell = self.cell.line_ranges(base, axis, lo, hi, strict)
        if not cell:
            return []
        lo, hi = cell[0]
        parts = [m.line_ranges(base, axis, lo, hi, True) for m in self.members]
        return _union_ranges(parts)

    def outer_rows(self):
        return self.cell.rows()


# -- module level oracles ----------------------------------------------------


def contains(C: ConvexSet, x) -> bool:
    return C.contains(vec(x))


def separate(C: ConvexSet, x) -> Optional[Cut]:
    """None when ``x`` is in ``C``; otherwise a cut ``a.y <= b`` valid on ``C`` with ``a.x > b``."""
    return C.separate(vec(x))


def interval_int_bounds(C: ConvexSet, direction) -> Optional[Tuple[Fraction, Fraction]]:
    """Rational lower/upper bounds of ``direction . x`` over ``C`` (None if ``C`` is empty)."""
    return C.bounds(vec(direction))


def axis_bounds(C: ConvexSet) -> Optional[List[Tuple[Fraction, Fraction]]]:
    out = []
    for i in range(C.dim):
        e = [ZERO] * C.dim
        e[i] = ONE
        bd = C.bounds(tuple(e))
        if bd is None:
            return None
        out.append(bd)
    return out


def circumradius(C: ConvexSet) -> Fraction:
    """A rational R with ``C`` inside the ball of radius R about the origin."""
    if isinstance(C, Ball):
        _, hi = sqrt_bounds(norm_sq(C.center))
        return hi + C.radius
    bds = axis_bounds(C)
    if bds is None:
        return ZERO
    _, hi = sqrt_bounds(sum((max(abs(lo), abs(up)) ** 2 for lo, up in bds), ZERO))
    return hi


def gauge(C: ConvexSet, anchor, x, tol) -> Fraction:
    """Approximate ``inf{λ > 0 : x - anchor ∈ λ (C - anchor)}`` to within ``tol`` by bisection."""
    anchor, x, tol = vec(anchor), vec(x), frac(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not C.contains_interior(anchor):
        raise ValueError("gauge anchor must lie in the interior of the set")
    d = sub(x, anchor)
    if all(v == 0 for v in d):
        return ZERO

    def inside(lam):
        return C.contains(tuple(a + v / lam for a, v in zip(anchor, d)))

    lo, hi = ZERO, ONE
    while not inside(hi):
        lo, hi = hi, hi * 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def _polyhedral_and_curved(C: ConvexSet):
    if isinstance(C, HPolyhedron):
        return [C], []
    if isinstance(C, Intersection):
        polys, curved = [], []
        for m in C.members:
            p, c = _polyhedral_and_curved(m)
            polys += p
            curved += c
        return polys, curved
    return [], [C]


def is_full_dimensional(C: ConvexSet, budget: int = 64) -> bool:
    """Exact for balls, quadratics and polyhedra; budgeted search for curved intersections."""
    if isinstance(C, Ball):
        return True
    if isinstance(C, ConvexQuadratic):
        x = C.minimizer()
        return x is None or C.value(x) < 0
    if isinstance(C, HPolyhedron):
        return C.interior_point() is not None
    if isinstance(C, UnionConvex):
        return any(is_full_dimensional(Intersection((C.cell, m))) for m in C.members)
    polys, curved = _polyhedral_and_curved(C)
    return strict_common_point(polys, curved, budget) is not None


def _affine_minimizer(Q, b, rows, S) -> Optional[Vector]:
    """Minimiser of ``x^T Q x + b^T x`` on ``{x : a_s . x = b_s, s in S}`` via the KKT system."""
    n = len(b)
    k = len(S)
    K, rhs = [], []
    for i in range(n):
        K.append([2 * Q[i][j] for j in range(n)] + [rows[s][0][i] for s in S])
        rhs.append(-b[i])
    for s in S:
        K.append(list(rows[s][0]) + [ZERO] * k)
        rhs.append(rows[s][1])
    sol, rk = solve_linear(K, rhs)
    if sol is None or rk < n + k:
        return None
    return sol[:n]


def quadratic_min_over_polytope(C, P: HPolyhedron) -> Optional[Tuple[Fraction, Vector]]:
    """Exact minimum of the strictly convex quadratic of ``C`` over the polytope ``P`` (None if ``P`` is empty).

    Starting from the unconstrained minimiser, the search only branches on
    rows that the current affine minimiser violates: the constrained optimum
    on an affine slice is always tight at one of them.
    """
    from .core import rank

    Q, b, _ = C.quadratic()
    if not is_pd(Q):
        raise ValueError("exact minimisation needs a positive definite quadratic")
    rows = [(a, r) for a, r in P.rows() if any(v != 0 for v in a)]
    if any(r < 0 for a, r in P.rows() if all(v == 0 for v in a)):
        return None
    best = None
    seen = set()
    stack = [()]
    while stack:
        S = stack.pop()
        if S in seen:
            continue
        seen.add(S)
        x = _affine_minimizer(Q, b, rows, S)
        if x is None:
            continue
        violated = [r for r, (a, rb) in enumerate(rows) if r not in S and dot(a, x) > rb]
        if not violated:
            v = C.value(x)
            if best is None or v < best[0]:
                best = (v, x)
            continue
        branches = [tuple(sorted(S + (r,))) for r in violated]
        if any(rank([rows[s][0] for s in T]) < len(T) for T in branches):
            # a violated row is implied by the equalities: this slice misses P
            continue
        stack.extend(branches)
    return best


def strict_common_point(polys: Sequence[HPolyhedron], curved: Sequence[ConvexSet], budget: int = 64) -> Optional[Vector]:
    """A point of the common interior, or None.

    Exact when at most one curved set is involved; otherwise candidate points
    (the polyhedral interior point and per-set minimisers) are joined by
    segments sampled at ``budget + 1`` points.
    """
    P = None
    for p in polys:
        P = p if P is None else P.intersect(p)
    anchor = P.interior_point() if P is not None else None
    if P is not None and anchor is None:
        return None
    if not curved:
        return anchor
    if P is not None and len(curved) == 1:
        res = quadratic_min_over_polytope(curved[0], P)
        if res is None or res[0] >= 0:
            return None
        x = res[1]
        if P.contains_interior(x):
            return x
        # push slightly towards the strict polyhedral interior point
        t = Fraction(1, 2)
        for _ in range(budget):
            y = lerp(x, anchor, t)
            if curved[0].contains_interior(y):
                return y
            t /= 2
        return None

    def good(x):
        return all(c.contains_interior(x) for c in curved) and (P is None or P.contains_interior(x))

    cands = [] if anchor is None else [anchor]
    for c in curved:
        if P is not None:
            res = quadratic_min_over_polytope(c, P)
            if res is not None:
                cands.append(res[1])
        else:
            m = c.minimizer() if hasattr(c, "minimizer") else None
            if m is not None:
                cands.append(m)
    for x in cands:
        if good(x):
            return x
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            for s in range(1, budget):
                y = lerp(cands[i], cands[j], Fraction(s, budget))
                if good(y):
                    return y
    log.warning("no strict common point found within budget %d; reporting empty interior", budget)
    return None
