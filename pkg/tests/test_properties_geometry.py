import itertools
from fractions import Fraction
from math import gcd

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rcip import lp
from rcip.arrangement import Arrangement, Hyperplane, brute_force_cells, cell_count_bound, locate, maximal_cells
from rcip.convex import Ball, ConvexQuadratic, HPolyhedron, gauge, quadratic_min_over_polytope
from rcip.core import dot, is_psd, solve_linear
from rcip.integer_hull import enumerate_lattice, hull_vertices, in_convex_hull

SETTINGS = settings(max_examples=60, deadline=None)

small = st.integers(-6, 6)
rat = st.builds(Fraction, st.integers(-12, 12), st.integers(1, 4))
pos_rat = st.builds(Fraction, st.integers(1, 12), st.integers(1, 4))


def vectors(n, elem=rat):
    return st.tuples(*[elem] * n)


@SETTINGS
@given(st.builds(Fraction, st.integers(-10**6, 10**6), st.integers(1, 10**6)))
def test_fractions_are_normalised(r):
    assert Fraction(r.numerator, r.denominator) == r
    assert gcd(abs(r.numerator), r.denominator) == 1


@SETTINGS
@given(vectors(3), vectors(3), vectors(3), rat)
def test_dot_bilinear_symmetric(u, v, w, c):
    assert dot(u, v) == dot(v, u)
    assert dot(tuple(c * x + y for x, y in zip(u, w)), v) == c * dot(u, v) + dot(w, v)


@SETTINGS
@given(st.lists(vectors(3), min_size=3, max_size=3), vectors(3))
def test_solve_linear_solutions_are_exact(A, b):
    x, _ = solve_linear(A, b)
    if x is not None:
        assert all(dot(row, x) == bi for row, bi in zip(A, b))


def _vertex_optimum(rows, c):
    """Best objective over all vertices of a bounded 2-D polygon (brute force)."""
    best = None
    for (a1, b1), (a2, b2) in itertools.combinations(rows, 2):
        x, r = solve_linear([a1, a2], [b1, b2])
        if x is None or r < 2:
            continue
        if all(dot(a, x) <= b for a, b in rows):
            v = dot(c, x)
            best = v if best is None or v > best else best
    return best


@SETTINGS
@given(st.lists(st.tuples(vectors(2, small), st.integers(-8, 8)), max_size=5), vectors(2, small))
def test_lp_matches_vertex_enumeration(extra, c):
    rows = [((Fraction(1), Fraction(0)), Fraction(5)), ((Fraction(-1), Fraction(0)), Fraction(5)),
            ((Fraction(0), Fraction(1)), Fraction(5)), ((Fraction(0), Fraction(-1)), Fraction(5))]
    rows += [(a, Fraction(b)) for a, b in extra if any(a)]
    r = lp.optimize(2, [lp.le(a, b) for a, b in rows], "max", c)
    best = _vertex_optimum(rows, c)
    if best is None:
        assert r.status == lp.INFEASIBLE
    else:
        assert r.status == lp.OPTIMAL and r.value == best
        assert all(dot(a, r.point) <= b for a, b in rows)


@SETTINGS
@given(st.lists(st.tuples(vectors(3, small), st.integers(-8, 8)), min_size=1, max_size=6), vectors(3, small))
def test_lp_duality(rows, c):
    """Primal max c.x s.t. Ax <= b, x >= 0 against the hand-built dual min b.y s.t. A^T y >= c, y >= 0."""
    rows = [(a, Fraction(b)) for a, b in rows]
    primal = lp.solve(lp.LinearProgram(3, [lp.le(a, b) for a, b in rows], ("max", c), nonneg=True))
    m = len(rows)
    dual_rows = [lp.ge(tuple(rows[i][0][j] for i in range(m)), c[j]) for j in range(3)]
    dual = lp.solve(lp.LinearProgram(m, dual_rows, ("min", tuple(b for _, b in rows)), nonneg=True))
    if primal.status == lp.OPTIMAL:
        assert dual.status == lp.OPTIMAL and dual.value == primal.value
    if primal.status == lp.UNBOUNDED:
        assert dual.status == lp.INFEASIBLE


@SETTINGS
@given(st.lists(st.tuples(vectors(2, st.integers(-8, 8)), st.integers(-8, 8)), min_size=1, max_size=4))
def test_interior_point_against_grid(rows):
    rows = [(a, Fraction(b)) for a, b in rows if any(a)]
    box = [((Fraction(1), Fraction(0)), Fraction(3)), ((Fraction(-1), Fraction(0)), Fraction(3)),
           ((Fraction(0), Fraction(1)), Fraction(3)), ((Fraction(0), Fraction(-1)), Fraction(3))]
    rows += box
    x = lp.interior_point([a for a, _ in rows], [b for _, b in rows])
    if x is not None:
        assert all(dot(a, x) < b for a, b in rows)
    grid = [Fraction(k, 16) for k in range(-48, 49)]
    found = any(all(dot(a, (u, v)) < b for a, b in rows) for u in grid for v in grid)
    # a strict grid point proves non-emptiness; slivers thinner than the grid may exist without one
    if found:
        assert x is not None


@SETTINGS
@given(vectors(2), pos_rat, vectors(2, st.builds(Fraction, st.integers(-40, 40), st.integers(1, 8))))
def test_ball_cuts_keep_members(c, r, x):
    B = Ball(c, r)
    cut = B.separate(x)
    assert (cut is None) == B.contains(x)
    if cut is not None:
        assert cut.violated_by(x)
        for k in range(64):
            # rational points of the ball along a spiral of directions
            t = Fraction(k - 32, 9)
            d = ((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))
            s = Fraction(k % 8, 8) * r
            y = (c[0] + s * d[0], c[1] + s * d[1])
            assert B.contains(y) and not cut.violated_by(y)


@SETTINGS
@given(vectors(2, st.integers(-3, 3)), st.integers(1, 3), vectors(2, st.integers(-8, 8)), st.integers(1, 9))
def test_ball_gauge_equals_scaled_distance(c, r, x, k):
    B = Ball(tuple(map(Fraction, c)), Fraction(r))
    x = tuple(Fraction(v) for v in x)
    tol = Fraction(1, 2**20)
    g = gauge(B, B.center, x, tol)
    dist_sq = sum((a - b) ** 2 for a, b in zip(x, B.center))
    # |g - d/r| <= tol, compared through squares
    assert (g - tol) ** 2 * r * r <= dist_sq or g <= tol
    assert dist_sq <= (g + tol) ** 2 * r * r
    y = tuple(cc + Fraction(k, 10) * (v - cc) for v, cc in zip(x, B.center))
    assert gauge(B, B.center, y, tol) <= g + 2 * tol


@SETTINGS
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 4), vectors(2, st.integers(-6, 6)))
def test_quadratic_minimum_over_square_is_a_lower_bound(p, q, s, w, c):
    Q = ((Fraction(w), Fraction(0)), (Fraction(0), Fraction(w)))
    C = ConvexQuadratic(Q, tuple(map(Fraction, c)), Fraction(s))
    P = HPolyhedron.from_rows([((1, 0), 2 + abs(p)), ((-1, 0), 2), ((0, 1), 2 + abs(q)), ((0, -1), 2), ((1, 1), 3)])
    value, x = quadratic_min_over_polytope(C, P)
    assert P.contains(x) and C.value(x) == value
    grid = [Fraction(k, 4) for k in range(-8, 21)]
    assert all(C.value((u, v)) >= value for u in grid for v in grid if P.contains((u, v)))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(-3, 3)), min_size=1, max_size=6))
def test_cell_count_matches_sign_vectors(n, raw):
    hs = [Hyperplane(tuple(Fraction(v) for v in a[:n]), Fraction(b)) for a, b in raw if any(a[:n])]
    assume(hs)
    arr = Arrangement(hs, n)
    cells = maximal_cells(arr)
    signs = [c.signs for c in cells]
    assert len(set(signs)) == len(signs)
    assert sorted(signs) == sorted(brute_force_cells(arr))
    assert len(cells) <= cell_count_bound(len(arr), n)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(vectors(2, st.integers(-3, 3)), st.integers(-3, 3)), min_size=1, max_size=4), st.data())
def test_cells_tile_the_box(raw, data):
    hs = [Hyperplane(tuple(map(Fraction, a)), Fraction(b)) for a, b in raw if any(a)]
    assume(hs)
    arr = Arrangement(hs, 2, box=Fraction(4))
    cells = maximal_cells(arr)
    for _ in range(40):
        x = data.draw(vectors(2, st.builds(Fraction, st.integers(-16, 16), st.just(4))))
        assert locate(cells, x)
    for c1, c2 in itertools.combinations(cells, 2):
        rows = c1.polyhedron.rows() + c2.polyhedron.rows()
        assert lp.interior_point([a for a, _ in rows], [b for _, b in rows]) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(0, 6)), max_size=3))
def test_hull_vertices_generate_the_lattice_points(n, raw):
    rows = [(tuple(Fraction(v) for v in a[:n]), Fraction(b)) for a, b in raw if any(a[:n])]
    P = HPolyhedron.box(n, 2).intersect(HPolyhedron.from_rows(rows)) if rows else HPolyhedron.box(n, 2)
    pts = enumerate_lattice(P, 2)
    verts = hull_vertices(pts)
    assert set(verts) <= set(pts.points)
    for p in pts.points:
        assert in_convex_hull(p, verts)
    for v in verts:
        assert not in_convex_hull(v, [u for u in verts if u != v])


@SETTINGS
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_psd_2x2(a, b, c):
    M = ((Fraction(a), Fraction(b)), (Fraction(b), Fraction(c)))
    assert is_psd(M) == (a >= 0 and c >= 0 and a * c - b * b >= 0)
