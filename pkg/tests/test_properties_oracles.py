import itertools
import random
from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rcip import lp
from rcip.bhc import (
    QuadraticBhcForm,
    Affine,
    classify_sphere_intersection,
    cover_for_balls,
    quadratic_from_form,
)
from rcip.convex import Ball, ConvexQuadratic, HPolyhedron, Intersection
from rcip.decompose import decompose_bhc_integer
from rcip.int_feasibility import convex_int_feasible, convex_int_optimize
from rcip.separation import separate_integer_hulls

from conftest import lattice

SETTINGS = settings(max_examples=40, deadline=None)
half = st.builds(Fraction, st.integers(-8, 8), st.just(2))


@st.composite
def convex_sets(draw, n):
    kind = draw(st.sampled_from(["ball", "quadratic", "polytope", "mixed"]))
    c = tuple(draw(half) for _ in range(n))
    if kind == "ball":
        return Ball(c, Fraction(draw(st.integers(1, 8)), draw(st.integers(1, 3))))
    if kind == "quadratic":
        d = [Fraction(draw(st.integers(1, 4))) for _ in range(n)]
        Q = tuple(tuple(d[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))
        b = tuple(draw(st.integers(-4, 4)) for _ in range(n))
        return ConvexQuadratic(Q, tuple(map(Fraction, b)), Fraction(-draw(st.integers(0, 12))))
    rows = [(tuple(Fraction(v) for v in draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n))), Fraction(draw(st.integers(-2, 4))))
            for _ in range(draw(st.integers(1, 4)))]
    rows = [(a, b) for a, b in rows if any(a)]
    P = HPolyhedron.box(n, 3).intersect(HPolyhedron.from_rows(rows)) if rows else HPolyhedron.box(n, 3)
    if kind == "polytope":
        return P
    return Intersection((P, Ball(c, Fraction(draw(st.integers(2, 8)), 2))))


@SETTINGS
@given(st.data(), st.integers(2, 3))
def test_convex_feasibility_and_optimisation_match_scan(data, n):
    C = data.draw(convex_sets(n))
    R = 3
    pts = [p for p in lattice(n, R) if C.contains(tuple(map(Fraction, p)))]
    w = convex_int_feasible(C, R)
    assert (w is None) == (not pts)
    if w is not None:
        assert C.contains(tuple(map(Fraction, w)))
        assert w == min(pts)
        d = tuple(Fraction(v) for v in data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)))
        for sense, pick in (("max", max), ("min", min)):
            _, v = convex_int_optimize(C, d, sense, R)
            assert v == pick(sum(a * b for a, b in zip(d, p)) for p in pts)


@SETTINGS
@given(st.data())
def test_separation_soundness_and_budget(data):
    n, R = 2, 4
    C1, C2 = data.draw(convex_sets(n)), data.draw(convex_sets(n))
    res = separate_integer_hulls(C1, C2, R)
    again = separate_integer_hulls(C1, C2, R)
    assert (res.a, res.b) == (again.a, again.b)
    pts1 = [p for p in lattice(n, R) if C1.contains(tuple(map(Fraction, p)))]
    pts2 = [p for p in lattice(n, R) if C2.contains(tuple(map(Fraction, p)))]
    assert res.iterations <= len(pts1) + len(pts2) + 1
    if res.separated:
        assert max(abs(v) for v in res.a) >= 1
        assert all(sum(a * x for a, x in zip(res.a, p)) <= res.b for p in pts1)
        assert all(sum(a * x for a, x in zip(res.a, p)) >= res.b for p in pts2)
    else:
        assert set(pts1) & set(pts2) or res.no_integer_witness


@st.composite
def balls(draw, n=2):
    c = tuple(draw(half) for _ in range(n))
    return Ball(c, Fraction(draw(st.integers(1, 8)), draw(st.integers(1, 3))))


@SETTINGS
@given(balls(), balls())
def test_classification_is_symmetric(B1, B2):
    assert classify_sphere_intersection(B1, B2) == classify_sphere_intersection(B2, B1)


@SETTINGS
@given(st.integers(1, 4), st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(-2, 2), st.integers(-2, 2))
def test_product_form_on_the_unit_sphere(alpha, a, b, a0, b0):
    assume(any(a) and any(b))
    f = QuadraticBhcForm(Fraction(alpha, 2), Affine(tuple(map(Fraction, a)), Fraction(a0)), Affine(tuple(map(Fraction, b)), Fraction(b0)))
    try:
        q, _ = quadratic_from_form(f)
    except ValueError:
        assume(False)
    # rational sphere points from Pythagorean quadruples (p^2 + q^2 + r^2 + s^2 parametrisation)
    for p, qq, r, s in itertools.product(range(-2, 3), repeat=4):
        den = p * p + qq * qq + r * r + s * s
        if den == 0:
            continue
        x = (Fraction(p * p + qq * qq - r * r - s * s, den), Fraction(2 * (qq * r + p * s), den), Fraction(2 * (qq * s - p * r), den))
        assert sum(v * v for v in x) == 1
        if q.value(x) == 0:
            assert f.h1(x) * f.h2(x) == 0


def _ball_instances(seed, n, m):
    rng = random.Random(seed)
    out = []
    for _ in range(m):
        c = tuple(Fraction(rng.randint(-6, 6), 2) for _ in range(n))
        out.append(Ball(c, Fraction(rng.randint(2, 8), rng.choice((2, 3)))))
    return out


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 3))
def test_decomposition_partitions_the_lattice(seed, n):
    m = 3 if n == 2 else 2
    members = _ball_instances(seed, n, m)
    try:
        cover = cover_for_balls(members)
    except ValueError:
        assume(False)
    R = 3
    pieces = decompose_bhc_integer(members, cover, R)
    for p in lattice(n, R):
        x = tuple(map(Fraction, p))
        removed = any(C.contains_interior(x) for C in members)
        owners = [s for s in pieces if s.polyhedron.contains(x)]
        assert owners
        assert removed == any(s.convex_part is not None and s.convex_part.contains(x) for s in owners)
    for s, t in itertools.combinations(pieces, 2):
        rows = s.polyhedron.rows() + t.polyhedron.rows()
        assert lp.interior_point([a for a, _ in rows], [b for _, b in rows]) is None


def _sample(piece, rng, count, n, R):
    pts = []
    for _ in range(count * 20):
        x = tuple(Fraction(rng.randint(-8 * R, 8 * R), 8) for _ in range(n))
        if piece.convex_part.contains(x):
            pts.append(x)
            if len(pts) == count:
                break
    return pts


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_component_unions_are_midpoint_convex(seed):
    members = _ball_instances(seed, 2, 3)
    try:
        cover = cover_for_balls(members)
    except ValueError:
        assume(False)
    rng = random.Random(seed)
    for piece in decompose_bhc_integer(members, cover, 3):
        if piece.convex_part is None:
            continue
        pts = _sample(piece, rng, 46, 2, 3)
        for x, y in itertools.combinations(pts, 2):
            mid = tuple((u + v) / 2 for u, v in zip(x, y))
            assert piece.convex_part.contains(mid)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_ideal_cover_containment_dichotomy(seed):
    """On a cell of an ideal cover, two overlapping balls restricted there are nested."""
    members = _ball_instances(seed, 2, 2)
    cover = cover_for_balls(members)
    if not (cover.pairs and cover.all_ideal):
        return
    rng = random.Random(seed)
    for piece in decompose_bhc_integer(members, cover, 3):
        if len(piece.members) != 2:
            continue
        X, Y = (members[i] for i in piece.members)
        pts = _sample(piece, rng, 200, 2, 3)
        inside_x = [x for x in pts if X.contains_interior(x)]
        inside_y = [x for x in pts if Y.contains_interior(x)]
        assert all(Y.contains(x) for x in inside_x) or all(X.contains(y) for y in inside_y)
