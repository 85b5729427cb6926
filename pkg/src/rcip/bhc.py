"""Boundary hyperplane covers: radical planes of balls, product-form quadratics and cover verification.

A cover for a family of convex sets is a list of hyperplanes such that, for
every pair, the intersection of the two boundaries lies on the union of the
hyperplanes assigned to that pair.
"""

from __future__ import annotations

import random
from math import isqrt
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import Hyperplane
from .convex import Ball, ConvexQuadratic, ConvexSet, HPolyhedron, Intersection, gauge
from .core import (
    ONE,
    ZERO,
    Vector,
    add,
    dot,
    frac,
    identity,
    is_pd,
    is_psd,
    lerp,
    mat_vec,
    norm_sq,
    primitive_direction,
    scale,
    sqrt_bounds,
    sub,
    vec,
)

EQUAL = "equal"
DISJOINT = "disjoint"
TANGENT = "tangent"
CONTAINED = "contained"
FULL_CIRCLE = "full_circle"


class NoCoverAvailable(ValueError):
    """No boundary hyperplane cover is known for a pair of sets."""


@dataclass
class CoverPair:
    hyperplanes: List[int]
    ideal: bool = False


@dataclass
class BoundaryCover:
    hyperplanes: List[Hyperplane] = field(default_factory=list)
    pairs: Dict[Tuple[int, int], CoverPair] = field(default_factory=dict)

    def add(self, i: int, j: int, planes: Sequence[Hyperplane], ideal: bool = False) -> None:
        key = (min(i, j), max(i, j))
        idx = []
        canon = {primitive_direction(h.a, h.b): k for k, h in enumerate(self.hyperplanes)}
        for h in planes:
            c = primitive_direction(h.a, h.b)
            if c not in canon:
                canon[c] = len(self.hyperplanes)
                self.hyperplanes.append(h)
            if canon[c] not in idx:
                idx.append(canon[c])
        new = key not in self.pairs
        pair = self.pairs.setdefault(key, CoverPair([], ideal))
        pair.hyperplanes.extend(k for k in idx if k not in pair.hyperplanes)
        if not new:
            pair.ideal = pair.ideal and ideal

    def planes_for(self, i: int, j: int) -> List[Hyperplane]:
        pair = self.pairs.get((min(i, j), max(i, j)))
        if pair is None:
            return list(self.hyperplanes)
        return [self.hyperplanes[k] for k in pair.hyperplanes]

    @property
    def all_ideal(self) -> bool:
        return all(p.ideal for p in self.pairs.values())


# -- balls -------------------------------------------------------------------


def radical_hyperplane(B1: Ball, B2: Ball) -> Optional[Hyperplane]:
    """The plane ``a.x = b`` with ``q1(x) - q2(x) = a.x - b`` identically, where ``q_k(x) = ||x - c_k||^2 - r_k^2``."""
    if B1.center == B2.center:
        return None
    a = scale(2, sub(B2.center, B1.center))
    b = norm_sq(B2.center) - norm_sq(B1.center) + B1.radius ** 2 - B2.radius ** 2
    return Hyperplane(a, b)


def classify_sphere_intersection(B1: Ball, B2: Ball) -> str:
    d2 = norm_sq(sub(B1.center, B2.center))
    r1, r2 = B1.radius, B2.radius
    if d2 == 0 and r1 == r2:
        return EQUAL
    outer = (r1 + r2) ** 2
    inner = (r1 - r2) ** 2
    if d2 > outer:
        return DISJOINT
    if d2 == outer or (d2 == inner and d2 > 0):
        return TANGENT
    if d2 < inner:
        return CONTAINED
    return FULL_CIRCLE


def cover_for_balls(balls: Sequence[Ball]) -> BoundaryCover:
    cover = BoundaryCover()
    for i, j in combinations(range(len(balls)), 2):
        kind = classify_sphere_intersection(balls[i], balls[j])
        if kind == EQUAL:
            raise NoCoverAvailable(f"balls {i} and {j} coincide; their common boundary is a whole sphere")
        if kind in (TANGENT, FULL_CIRCLE):
            cover.add(i, j, [radical_hyperplane(balls[i], balls[j])], ideal=kind == FULL_CIRCLE)
    return cover


# -- quadratic forms ---------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    """The affine function ``a.x + c``."""

    a: Vector
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", vec(self.a))
        object.__setattr__(self, "c", frac(self.c))

    def __call__(self, x) -> Fraction:
        return dot(self.a, x) + self.c

    def zero_set(self) -> Hyperplane:
        if all(v == 0 for v in self.a):
            raise ValueError("affine factor is constant; its zero set is not a hyperplane")
        return Hyperplane(self.a, -self.c)


@dataclass(frozen=True)
class QuadraticBhcForm:
    """``alpha (||x||^2 - 1) + h1(x) h2(x)`` (product) or ``alpha (||x||^2 - 1) + h1(x)`` (single)."""

    alpha: Fraction
    h1: Affine
    h2: Optional[Affine] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", frac(self.alpha))
        if self.alpha == 0:
            raise ValueError("alpha must be non-zero")

    @property
    def variant(self) -> str:
        return "single" if self.h2 is None else "product"

    @property
    def dim(self) -> int:
        return len(self.h1.a)

    def __call__(self, x) -> Fraction:
        base = self.alpha * (norm_sq(x) - 1)
        return base + (self.h1(x) if self.h2 is None else self.h1(x) * self.h2(x))


def expand_form(f: QuadraticBhcForm):
    n = f.dim
    al = f.alpha
    if f.h2 is None:
        Q = tuple(tuple(al if i == j else ZERO for j in range(n)) for i in range(n))
        return Q, f.h1.a, -al + f.h1.c
    a1, c1, a2, c2 = f.h1.a, f.h1.c, f.h2.a, f.h2.c
    Q = tuple(
        tuple((al if i == j else ZERO) + (a1[i] * a2[j] + a2[i] * a1[j]) / 2 for j in range(n)) for i in range(n)
    )
    b = tuple(a1[i] * c2 + a2[i] * c1 for i in range(n))
    return Q, b, -al + c1 * c2


def quadratic_from_form(f: QuadraticBhcForm, name: str = "") -> Tuple[ConvexQuadratic, List[Hyperplane]]:
    """Expand the form into a bounded convex quadratic set and its cover hyperplanes against the unit ball."""
    Q, b, c = expand_form(f)
    if not is_psd(Q):
        raise ValueError("expanded quadratic is not convex")
    if not is_pd(Q):
        raise ValueError("expanded quadratic does not define a bounded set")
    planes = [f.h1.zero_set()] + ([] if f.h2 is None else [f.h2.zero_set()])
    return ConvexQuadratic(Q, b, c, name), planes


def convexity_condition(alpha, a, b) -> bool:
    """Whether ``alpha (||x||^2 - 1) + (a.x + a0)(b.x + b0)`` is convex (independent of a0, b0).

    The Hessian ``2 alpha I + a b^T + b a^T`` has eigenvalues ``2 alpha`` and
    ``2 alpha + a.b ± ||a|| ||b||``; for n = 1 it is the scalar ``2 alpha + 2ab``.
    """
    alpha, a, b = frac(alpha), vec(a), vec(b)
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    if all(v == 0 for v in a) or all(v == 0 for v in b):
        raise ValueError("a and b must be non-zero")
    if len(a) == 1:
        return 2 * alpha + 2 * a[0] * b[0] >= 0
    s = dot(a, b) + 2 * alpha
    return s >= 0 and s * s >= norm_sq(a) * norm_sq(b)


def hessian_of_product_form(alpha, a, b):
    alpha, a, b = frac(alpha), vec(a), vec(b)
    n = len(a)
    return tuple(tuple((2 * alpha if i == j else ZERO) + a[i] * b[j] + b[i] * a[j] for j in range(n)) for i in range(n))


def general_structure_cover(factors: Sequence[Affine]) -> List[Hyperplane]:
    """Zero sets of the affine factors ``h_j`` of a supplied factorisation."""
    return [h.zero_set() for h in factors]


# -- automatic covers --------------------------------------------------------


def _is_unit_ball(C: ConvexSet) -> bool:
    return isinstance(C, Ball) and C.radius == 1 and all(v == 0 for v in C.center)


def _pair_planes(X: ConvexSet, Y: ConvexSet, forms: Dict[int, QuadraticBhcForm], ix=None, iy=None) -> Tuple[List[Hyperplane], bool]:
    """Cover hyperplanes for ``∂X ∩ ∂Y`` and whether they are ideal."""
    if isinstance(X, HPolyhedron):
        return [Hyperplane(a, b) for a, b in X.rows() if any(v != 0 for v in a)], False
    if isinstance(Y, HPolyhedron):
        return _pair_planes(Y, X, forms, iy, ix)
    if isinstance(X, Intersection):
        out = []
        for m in X.members:
            out += _pair_planes(m, Y, forms)[0]
        return out, False
    if isinstance(Y, Intersection):
        return _pair_planes(Y, X, forms, iy, ix)
    if isinstance(X, Ball) and isinstance(Y, Ball):
        kind = classify_sphere_intersection(X, Y)
        if kind == EQUAL:
            raise NoCoverAvailable("identical balls")
        if kind in (DISJOINT, CONTAINED):
            return [], False
        return [radical_hyperplane(X, Y)], kind == FULL_CIRCLE
    if ix in forms and _is_unit_ball(Y):
        return _form_planes(forms[ix]), False
    if iy in forms and _is_unit_ball(X):
        return _form_planes(forms[iy]), False
    if hasattr(X, "quadratic") and hasattr(Y, "quadratic"):
        plane = _proportional_difference(X, Y)
        if plane is not None:
            return plane, False
    raise NoCoverAvailable(f"no boundary hyperplane cover is known for {type(X).__name__} / {type(Y).__name__}")


def _form_planes(f: QuadraticBhcForm) -> List[Hyperplane]:
    return [f.h1.zero_set()] + ([] if f.h2 is None else [f.h2.zero_set()])


def _proportional_difference(X, Y) -> Optional[List[Hyperplane]]:
    """When ``Q_Y = t Q_X`` the function ``t q_X - q_Y`` is affine and vanishes on both boundaries."""
    QX, bX, cX = X.quadratic()
    QY, bY, cY = Y.quadratic()
    t = None
    for rx, ry in zip(QX, QY):
        for u, v in zip(rx, ry):
            if u == 0 and v == 0:
                continue
            if u == 0:
                return None
            r = v / u
            if t is None:
                t = r
            elif r != t:
                return None
    if t is None or t <= 0:
        return None
    a = tuple(t * u - v for u, v in zip(bX, bY))
    c = t * cX - cY
    if all(v == 0 for v in a):
        if c == 0:
            raise NoCoverAvailable("two sets share their whole boundary")
        return []
    return [Hyperplane(a, -c)]


def auto_cover(sets: Sequence[ConvexSet], forms: Optional[Dict[int, QuadraticBhcForm]] = None) -> BoundaryCover:
    forms = forms or {}
    cover = BoundaryCover()
    for i, j in combinations(range(len(sets)), 2):
        planes, ideal = _pair_planes(sets[i], sets[j], forms, i, j)
        if planes:
            cover.add(i, j, planes, ideal)
        else:
            cover.pairs.setdefault((i, j), CoverPair([], False))
    return cover


# -- verification ------------------------------------------------------------


@dataclass
class Violation:
    pair: Tuple[int, int]
    point: Optional[Vector]
    reason: str


@dataclass
class CoverReport:
    pairs_checked: int = 0
    samples: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _on_plane(h: Hyperplane, x) -> bool:
    return dot(h.a, x) == h.b


def _check_ball_pair(i, j, B1: Ball, B2: Ball, planes: List[Hyperplane], report: CoverReport) -> None:
    kind = classify_sphere_intersection(B1, B2)
    if kind in (DISJOINT, CONTAINED):
        return
    if kind == EQUAL:
        report.violations.append(Violation((i, j), None, "identical balls: the boundary intersection is a sphere"))
        return
    rad = radical_hyperplane(B1, B2)
    canon = primitive_direction(rad.a, rad.b)
    if any(primitive_direction(h.a, h.b) == canon for h in planes):
        report.samples += 1
        return
    # the intersection is the sphere of radius t around m inside the radical plane
    c1, c2 = B1.center, B2.center
    d = sub(c2, c1)
    d2 = norm_sq(d)
    s = (d2 + B1.radius ** 2 - B2.radius ** 2) / (2 * d2)
    m = add(c1, scale(s, d))
    t2 = B1.radius ** 2 - s * s * d2
    n = len(c1)
    if t2 == 0:
        report.samples += 1
        if not any(_on_plane(h, m) for h in planes):
            report.violations.append(Violation((i, j), m, "tangent point lies on no cover hyperplane"))
        return
    if n >= 3:
        report.violations.append(
            Violation((i, j), m, "the boundary intersection is a sphere of positive dimension and its radical plane is missing")
        )
        return
    # n == 2: two points m ± sqrt(t2/|v|^2) v with v ⟂ d
    v = (-d[1], d[0])
    k2 = t2 / norm_sq(v)  # the points are m ± k v with k = sqrt(k2)
    for sign in (1, -1):
        report.samples += 1
        covered = False
        for h in planes:
            # a.(m + sign k v) = b  <=>  sign k (a.v) = b - a.m
            av, rhs = dot(h.a, v), h.b - dot(h.a, m)
            if av == 0:
                covered = rhs == 0
            else:
                q = rhs / (sign * av)
                covered = q >= 0 and q * q == k2
            if covered:
                break
        if not covered:
            lo, _ = sqrt_bounds(k2, 30)
            report.violations.append(Violation((i, j), add(m, scale(sign * lo, v)), "intersection point off every cover hyperplane"))


def _interior_anchor(C: ConvexSet) -> Optional[Vector]:
    if isinstance(C, Ball):
        return C.center
    if hasattr(C, "minimizer"):
        x = C.minimizer()
        if x is not None and C.contains_interior(x):
            return x
    if isinstance(C, HPolyhedron):
        return C.interior_point()
    return None


def _circle_point(t: Fraction) -> Tuple[Fraction, Fraction]:
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _sqrt_approx(D: Fraction, bits: int) -> Fraction:
    """``sqrt(D)`` rounded down to a multiple of ``2^-bits``."""
    scale_ = 1 << (2 * bits)
    return Fraction(isqrt(D.numerator * scale_ // D.denominator), 1 << bits)


def _boundary_point(C, anchor, direction, tol) -> Vector:
    """Point of ``∂C`` on the ray ``anchor + s direction`` to within ``tol``.

    Quadratic sets solve the exit parameter in closed form; other sets bisect the gauge.
    """
    if isinstance(C, (Ball, ConvexQuadratic)):
        Q, b, c = C.quadratic()
        Qd = mat_vec(Q, direction)
        A = dot(direction, Qd)
        B = 2 * dot(anchor, Qd) + dot(b, direction)
        c0 = C.value(anchor)
        if A > 0 and c0 < 0:
            bits = 8 + max(1, (1 / tol).numerator.bit_length())
            s = (-B + _sqrt_approx(B * B - 4 * A * c0, bits)) / (2 * A)
            return add(anchor, scale(s, direction))
    x = add(anchor, direction)
    g = gauge(C, anchor, x, tol)
    return add(anchor, scale(1 / g, direction))


def _sample_pair(i, j, X, Y, planes, report, samples, rng, tol=Fraction(1, 2**30)) -> None:
    anchor = _interior_anchor(X)
    if anchor is None:
        return
    n = X.dim
    fine = tol * tol
    qY = Y.value if hasattr(Y, "value") else None
    if qY is None:
        return
    params = [Fraction(k - 64, 16) for k in range(129)]
    for _ in range(max(1, samples // 16)):
        # a random 2-plane through the anchor
        u = tuple(Fraction(rng.randint(-4, 4)) for _ in range(n))
        w = tuple(Fraction(rng.randint(-4, 4)) for _ in range(n))
        if all(x == 0 for x in u) or all(x == 0 for x in w) or _parallel(u, w):
            continue

        def point(t):
            c, s = _circle_point(t)
            return _boundary_point(X, anchor, add(scale(c, u), scale(s, w)), fine)

        vals = [(t, qY(point(t))) for t in params]
        for (t0, v0), (t1, v1) in zip(vals, vals[1:]):
            if (v0 > 0) == (v1 > 0):
                continue
            lo, hi = t0, t1
            for _ in range(40):
                mid = (lo + hi) / 2
                if (qY(point(mid)) > 0) == (v0 > 0):
                    lo = mid
                else:
                    hi = mid
            x = point((lo + hi) / 2)
            report.samples += 1
            if not any(_near(h, x, tol) for h in planes):
                report.violations.append(Violation((i, j), x, "sampled boundary intersection point is off every cover hyperplane"))


def _parallel(u, w) -> bool:
    return all(u[a] * w[b] == u[b] * w[a] for a in range(len(u)) for b in range(len(u)))


def _near(h: Hyperplane, x, tol) -> bool:
    r = dot(h.a, x) - h.b
    return r * r <= tol * tol * norm_sq(h.a)


def verify_cover(sets: Sequence[ConvexSet], cover: BoundaryCover, samples: int = 64, seed: int = 0) -> CoverReport:
    """Check every pair's boundary intersection against its assigned hyperplanes.

    Ball pairs are decided exactly; pairs involving a polyhedron pass when all
    its facet planes are in the cover; other curved pairs are sampled.
    """
    rng = random.Random(seed)
    report = CoverReport()
    for i, j in combinations(range(len(sets)), 2):
        X, Y = sets[i], sets[j]
        planes = cover.planes_for(i, j)
        report.pairs_checked += 1
        if isinstance(X, Ball) and isinstance(Y, Ball):
            _check_ball_pair(i, j, X, Y, planes, report)
            continue
        poly = X if isinstance(X, HPolyhedron) else Y if isinstance(Y, HPolyhedron) else None
        if poly is not None:
            have = {primitive_direction(h.a, h.b) for h in planes}
            missing = [
                (a, b) for a, b in poly.rows() if any(v != 0 for v in a) and primitive_direction(a, b) not in have
            ]
            if not missing:
                continue
        _sample_pair(i, j, X, Y, planes, report, samples, rng)
    return report
