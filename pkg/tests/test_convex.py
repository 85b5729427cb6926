from fractions import Fraction

import pytest

from rcip.convex import (
    Ball,
    ConvexQuadratic,
    HPolyhedron,
    Intersection,
    NonconvexQuadratic,
    UnionConvex,
    gauge,
    interval_int_bounds,
    is_full_dimensional,
    quadratic_min_over_polytope,
    strict_common_point,
)

from conftest import F, lattice

TOL = Fraction(1, 2**20)
UNIT = Ball(F(0, 0), 1)
SQUARE = HPolyhedron.box(2, 1).intersect(HPolyhedron.from_rows([(F(-1, 0), 0), (F(0, -1), 0)]))


def test_ball_membership_boundary_counts():
    assert UNIT.contains(F(1, 0))
    assert not UNIT.contains_interior(F(1, 0))
    assert not UNIT.contains(F(1, 1))


def test_quadratic_membership():
    q = ConvexQuadratic([F(1, 0), F(0, 1)], F(0, 0), -1)
    assert q.contains(F("1/2", "1/2"))


def test_indefinite_quadratic_rejected():
    with pytest.raises(ValueError):
        ConvexQuadratic([F(1, 0), F(0, -1)], F(0, 0), -1)
    assert NonconvexQuadratic([F(1, 0), F(0, -1)], F(0, 0), -1).contains(F(0, 5))


def test_ball_cut_is_supporting():
    cut = UNIT.separate(F(2, 0))
    assert cut.a[1] == 0 and cut.b / cut.a[0] == 1
    assert cut.violated_by(F(2, 0))


def test_square_cut_is_violated_row():
    cut = SQUARE.separate(F(2, 0))
    assert cut.a == F(1, 0) and cut.b == 1


def test_member_point_has_no_cut():
    assert UNIT.separate(F(0, 0)) is None


def test_intersection_cut_contract():
    C = Intersection((SQUARE, UNIT))
    cut = C.separate(F(0, 2))
    assert cut is not None and cut.violated_by(F(0, 2))
    # the cut keeps every point of C
    for p in lattice(2, 2):
        if C.contains(F(*p)):
            assert not cut.violated_by(F(*p))


@pytest.mark.parametrize(
    "C, d, expected",
    [(UNIT, (1, 0), (-1, 1)), (SQUARE, (1, 1), (0, 2)), (Ball(F(3, 0), 2), (1, 0), (1, 5))],
)
def test_bounds(C, d, expected):
    lo, hi = C.bounds(F(*d))
    assert (lo, hi) == expected


def test_ellipse_bounds():
    E = ConvexQuadratic([F("1/4", 0), F(0, 1)], F(0, 0), -1)
    assert E.bounds(F(1, 0)) == (-2, 2)
    assert interval_int_bounds(E, F(0, 1)) == (-1, 1)


@pytest.mark.parametrize(
    "C, anchor, x, expected",
    [(UNIT, (0, 0), (2, 0), 2), (UNIT, (0, 0), (1, 0), 1), (SQUARE, ("1/2", "1/2"), (1, "1/2"), 1)],
)
def test_gauge(C, anchor, x, expected):
    assert abs(gauge(C, F(*anchor), F(*x), TOL) - expected) <= TOL


def test_full_dimensionality():
    assert is_full_dimensional(UNIT)
    assert not is_full_dimensional(ConvexQuadratic([F(1, 0), F(0, 1)], F(0, 0), 0))
    assert not is_full_dimensional(HPolyhedron.from_rows([(F(1, 0), 0), (F(-1, 0), 0)]))


def test_line_ranges_on_ball():
    # x2 = 0 line through the unit ball of radius 5/2: integer x1 in [-2, 2]
    B = Ball(F(0, 0), Fraction(5, 2))
    assert B.line_ranges(F(0, 0), 0, -5, 5) == [(-2, 2)]
    assert Ball(F(0, 0), 2).line_ranges(F(0, 0), 0, -5, 5, strict=True) == [(-1, 1)]


def test_quadratic_min_over_polytope():
    B = Ball(F(3, 0), 1)
    value, x = quadratic_min_over_polytope(B, SQUARE)
    assert x == F(1, 0) and value == 4 - 1


def test_strict_common_point():
    p = strict_common_point([SQUARE], [Ball(F(0, 0), 1), Ball(F(1, 0), 1)])
    assert p is not None
    assert SQUARE.contains_interior(p) and Ball(F(1, 0), 1).contains_interior(p)
    assert strict_common_point([SQUARE], [Ball(F(3, 3), 1)]) is None


def test_union_convex_membership():
    U = UnionConvex((Ball(F(0, 0), 1), Ball(F(1, 0), 1)), HPolyhedron.box(2, 2), "overlapping pair")
    assert U.contains(F(0, 0)) and U.contains(F("3/2", 0))
    assert not U.contains(F(1, 1))
