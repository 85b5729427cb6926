from fractions import Fraction

import pytest

from rcip.convex import Ball, ConvexQuadratic, HPolyhedron
from rcip.separation import (
    INTERSECTING,
    continuous_weak_separation,
    lattice_count,
    separate_integer_hulls,
    strict_integer_separation,
)

from conftest import F, lattice


def box2(x0, x1, y0, y1):
    return HPolyhedron.from_rows([(F(1, 0), x1), (F(-1, 0), -x0), (F(0, 1), y1), (F(0, -1), -y0)])


def assert_separates(a, b, C1, C2, R, margin=0):
    for p in lattice(2, R):
        x = F(*p)
        v = sum(ai * xi for ai, xi in zip(a, x))
        if C1.contains(x):
            assert v <= b
        if C2.contains(x):
            assert v >= b + margin


def test_disjoint_boxes():
    C1, C2 = box2(0, 1, 0, 1), box2(3, 4, 0, 1)
    res = separate_integer_hulls(C1, C2, 5)
    assert res.separated and max(abs(x) for x in res.a) >= 1
    assert_separates(res.a, res.b, C1, C2, 5)
    assert res.iterations <= lattice_count(2, 5)


def test_identical_balls_intersect():
    res = separate_integer_hulls(Ball(F(0, 0), 1), Ball(F(0, 0), 1), 3)
    assert res.status == INTERSECTING and res.witness is not None
    assert Ball(F(0, 0), 1).contains(F(*res.witness))


def test_distant_balls():
    C1, C2 = Ball(F(0, 0), 1), Ball(F(3, 0), 1)
    res = separate_integer_hulls(C1, C2, 5)
    assert res.separated
    assert_separates(res.a, res.b, C1, C2, 5)


def test_strict_separation_margin():
    C1, C2 = Ball(F(0, 0), 1), Ball(F(3, 0), 1)
    a, beta = strict_integer_separation(C1, C2, 5)
    assert all(isinstance(x, int) for x in a)
    assert_separates(a, beta, C1, C2, 5, margin=1)
    assert strict_integer_separation(C1, Ball(F(1, 0), 1), 5) is None


def test_box_pair_axis_gap():
    C1, C2 = box2(0, 1, 0, 1), box2(3, 4, 0, 1)
    a, b = continuous_weak_separation(C1, C2)
    for v in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        assert sum(x * y for x, y in zip(a, F(*v))) <= b
    for v in [(3, 0), (4, 0), (3, 1), (4, 1)]:
        assert sum(x * y for x, y in zip(a, F(*v))) >= b


def test_ball_pair_midpoint():
    a, b = continuous_weak_separation(Ball(F(0, 0), 1), Ball(F(4, 0), 1))
    assert a[1] == 0 and b / a[0] == 2


def test_overlapping_balls_have_no_continuous_separator():
    assert continuous_weak_separation(Ball(F(0, 0), 1), Ball(F(1, 0), 1)) is None


def test_ball_quadratic_has_no_continuous_path():
    q = ConvexQuadratic([F(1, 0), F(0, 2)], F(-8, 0), 15)
    assert continuous_weak_separation(Ball(F(0, 0), 1), q) is None


@pytest.mark.parametrize("R", [2, 3])
def test_empty_side_is_separable(R):
    # the small ball holds no lattice point, so any hyperplane keeping the square on one side works
    far = Ball(F(Fraction(1, 2), Fraction(1, 2)), Fraction(1, 4))
    res = separate_integer_hulls(far, box2(0, 1, 0, 1), R)
    assert res.separated
    assert_separates(res.a, res.b, far, box2(0, 1, 0, 1), R)
