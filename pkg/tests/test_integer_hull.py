from fractions import Fraction

from rcip.convex import Ball, HPolyhedron
from rcip.integer_hull import enumerate_lattice, hull_vertices, in_convex_hull, reverse_convex_feasible

from conftest import F, lattice

SQUARE = HPolyhedron.from_rows([(F(1, 0), 1), (F(-1, 0), 0), (F(0, 1), 1), (F(0, -1), 0)])
PENTAGON = HPolyhedron.from_rows([(F(-1, -1), -1), (F(-1, 1), 1), (F(0, 1), 2), (F(1, 0), 2), (F(1, -1), 1)])
PENTAGON_VERTICES = {(1, 0), (0, 1), (1, 2), (2, 2), (2, 1)}


def test_square_lattice():
    assert set(enumerate_lattice(SQUARE, 3).points) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_pentagon_lattice_matches_double_loop():
    pts = set(enumerate_lattice(PENTAGON, 3).points)
    loop = {p for p in lattice(2, 0, 2) if PENTAGON.contains(F(*p))}
    assert pts == loop
    assert pts == PENTAGON_VERTICES | {(1, 1)}


def test_empty_polyhedron():
    P = HPolyhedron.from_rows([(F(1, 0), Fraction(1, 3)), (F(-1, 0), Fraction(-1, 2))])
    assert not enumerate_lattice(P, 3).points


def test_hull_vertices():
    assert set(hull_vertices(enumerate_lattice(SQUARE, 3))) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert set(hull_vertices(enumerate_lattice(PENTAGON, 3))) == PENTAGON_VERTICES
    assert set(hull_vertices([(0, 0), (1, 0), (2, 0)])) == {(0, 0), (2, 0)}


def test_hull_vertices_3d_cube():
    cube = HPolyhedron.box(3, 1)
    verts = set(hull_vertices(enumerate_lattice(cube, 1)))
    assert verts == {p for p in lattice(3, 1) if all(abs(x) == 1 for x in p)}


def test_in_convex_hull():
    assert in_convex_hull((1, 1), [(0, 0), (2, 0), (0, 2), (2, 2)])
    assert not in_convex_hull((3, 3), [(0, 0), (2, 0), (0, 2), (2, 2)])


def test_small_ball_misses_corners():
    w = reverse_convex_feasible(SQUARE, Ball(F("1/2", "1/2"), Fraction(1, 8)), 3)
    assert w in {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_large_ball_covers_corners():
    assert reverse_convex_feasible(SQUARE, Ball(F("1/2", "1/2"), 1), 3) is None


def test_single_set_covering_pentagon_vertices():
    C = Ball(F(1, 1), Fraction(3, 2))
    assert all(C.contains(F(*v)) for v in PENTAGON_VERTICES)
    assert reverse_convex_feasible(PENTAGON, C, 3) is None


def test_open_semantics_keeps_boundary_points():
    # corners sit at distance sqrt(1/2) < 1, so even the open ball removes them
    C = Ball(F("1/2", "1/2"), 1)
    assert reverse_convex_feasible(SQUARE, C, 3, open_set=True) is None
    edge = Ball(F(0, 0), 1)
    assert reverse_convex_feasible(SQUARE, edge, 3, open_set=True) is not None
    assert reverse_convex_feasible(SQUARE, edge, 3, open_set=False) == (1, 1)
