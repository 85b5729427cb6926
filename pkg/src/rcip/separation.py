"""Weak separation of two convex sets' integer points by cut generation, and exact continuous separation for balls and polyhedra."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import lp
from .convex import Ball, ConvexSet, HPolyhedron, Intersection
from .core import (
    ONE,
    ZERO,
    Vector,
    ceil_frac,
    dot,
    floor_frac,
    frac,
    integral_row,
    lcm,
    norm_sq,
    sqrt_bounds,
    sub,
)
from .int_feasibility import convex_int_feasible, convex_int_optimize

SEPARATED = "separated"
INTERSECTING = "intersecting"


class SeparationLoopError(RuntimeError):
    """Cut generation exceeded the number of available lattice rows."""


@dataclass
class SeparationResult:
    status: str
    a: Optional[Vector] = None
    b: Optional[Fraction] = None
    witness: Optional[Tuple[int, ...]] = None
    no_integer_witness: bool = False
    iterations: int = 0  # master solves that produced a candidate cut
    normalization: Optional[Tuple[int, int]] = None
    master_solves: int = 0

    @property
    def separated(self) -> bool:
        return self.status == SEPARATED


def _normalizations(n: int):
    for i in range(n):
        yield i, 1
    for i in range(n):
        yield i, -1


def _master(n, i, sign, rows1, rows2, M, margin) -> Optional[Tuple[Vector, Fraction]]:
    # variables: a (n), b (1), u (n)
    dim = 2 * n + 1
    cons = []

    def row(a_part, b_coef=ZERO, u_part=None):
        return tuple(a_part) + (b_coef,) + tuple(u_part or (ZERO,) * n)

    for j in range(n):
        e = tuple(ONE if k == j else ZERO for k in range(n))
        neg = tuple(-x for x in e)
        cons.append(lp.Constraint(row(e, ZERO, neg), lp.LE, ZERO))  # a_j - u_j <= 0
        cons.append(lp.Constraint(row(neg, ZERO, neg), lp.LE, ZERO))  # -a_j - u_j <= 0
        if M is not None:
            cons.append(lp.Constraint(row((ZERO,) * n, ZERO, e), lp.LE, M))
    e_i = tuple(ONE if k == i else ZERO for k in range(n))
    if sign > 0:
        cons.append(lp.Constraint(row(e_i), lp.GE, ONE))
    else:
        cons.append(lp.Constraint(row(e_i), lp.LE, -ONE))
    for x in rows1:
        cons.append(lp.Constraint(row(x, -ONE), lp.LE, ZERO))
    for y in rows2:
        cons.append(lp.Constraint(row(y, -ONE), lp.GE, Fraction(margin)))
    obj = row((ZERO,) * n, ZERO, (ONE,) * n)
    res = lp.solve(lp.LinearProgram(dim, cons, ("min", obj)))
    if res.status != lp.OPTIMAL:
        return None
    return res.point[:n], res.point[n]


def lattice_count(n: int, R) -> int:
    R = frac(R)
    return (floor_frac(R) - ceil_frac(-R) + 1) ** n


def separate_integer_hulls(C1: ConvexSet, C2: ConvexSet, box, margin: int = 0) -> SeparationResult:
    """Find ``a != 0`` and ``b`` with ``a.x <= b`` on ``C1 ∩ Z^n`` and ``a.y >= b + margin`` on ``C2 ∩ Z^n``.

    Each of the 2n normalised master LPs (``a_i >= 1`` then ``a_i <= -1``) is
    refined by adding the integer optimisers of ``a`` over ``C1`` and ``C2``
    until stable.  ``margin=0`` bounds ``|a_i|`` by ``4 n R``; with a positive
    margin the bound is dropped, since strict separation may need larger
    coefficients.
    """
    R = frac(box)
    n = C1.dim
    if C2.dim != n:
        raise ValueError("sets have different dimensions")
    M = None if margin else 4 * n * R
    cap = lattice_count(n, R) + 1
    rows1: List[Vector] = []
    rows2: List[Vector] = []
    seen1, seen2 = set(), set()
    iterations = solves = 0
    for i, sign in _normalizations(n):
        while True:
            solves += 1
            sol = _master(n, i, sign, rows1, rows2, M, margin)
            if sol is None:
                break
            iterations += 1
            if iterations > cap:
                raise SeparationLoopError(f"cut generation exceeded {cap} iterations")
            a, b = sol
            added = False
            top = convex_int_optimize(C1, a, "max", R)
            if top is not None and top[1] > b and top[0] not in seen1:
                seen1.add(top[0])
                rows1.append(tuple(Fraction(v) for v in top[0]))
                added = True
            bot = convex_int_optimize(C2, a, "min", R)
            if bot is not None and bot[1] < b + margin and bot[0] not in seen2:
                seen2.add(bot[0])
                rows2.append(tuple(Fraction(v) for v in bot[0]))
                added = True
            if not added:
                return SeparationResult(SEPARATED, a, b, iterations=iterations, normalization=(i, sign), master_solves=solves)
    w = convex_int_feasible(Intersection((C1, C2)), R)
    return SeparationResult(INTERSECTING, witness=w, no_integer_witness=w is None, iterations=iterations, master_solves=solves)


def strict_integer_separation(C1: ConvexSet, C2: ConvexSet, box) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Integral ``a`` and integer ``beta`` with ``a.x <= beta`` on ``C1 ∩ Z^n`` and ``a.y >= beta + 1`` on ``C2 ∩ Z^n``.

    Returns None when the two sets share an integer point.  ``beta`` is the
    exact maximum of ``a.x`` over ``C1``'s integer points (or the bound from the
    master LP when ``C1`` has none).
    """
    res = separate_integer_hulls(C1, C2, box, margin=1)
    if not res.separated:
        return None
    den = 1
    for x in (*res.a, res.b):
        den = lcm(den, x.denominator)
    ia = tuple(int(x * den) for x in res.a)
    top = convex_int_optimize(C1, ia, "max", box)
    beta = int(top[1]) if top is not None else floor_frac(res.b * den)
    return ia, beta


def _ball_pair(B1: Ball, B2: Ball) -> Optional[Tuple[Vector, Fraction]]:
    a = sub(B2.center, B1.center)
    nsq = norm_sq(a)
    if nsq == 0:
        return None
    rsum = B1.radius + B2.radius
    if nsq < rsum * rsum:
        return None
    bits = 8
    while True:
        _, hi = sqrt_bounds(nsq, bits)
        lo_rho, hi_rho = B1.radius * hi, nsq - B2.radius * hi
        if lo_rho <= hi_rho:
            break
        bits *= 2
        if bits > 4096:
            return None
    rho = (lo_rho + hi_rho) / 2
    ia, ib = integral_row(a, dot(a, B1.center) + rho)
    return tuple(Fraction(x) for x in ia), Fraction(ib)


def _polyhedron_pair(P1: HPolyhedron, P2: HPolyhedron) -> Optional[Tuple[Vector, Fraction]]:
    """Farkas multipliers λ, μ >= 0 with λA1 = -μA2 = a and λb1 <= -μb2 give ``a.x <= λb1 <= a.y``."""
    n = P1.dim
    m1, m2 = len(P1.A), len(P2.A)
    dim = m1 + m2
    base = []
    for j in range(n):
        coef = tuple(P1.A[r][j] for r in range(m1)) + tuple(P2.A[r][j] for r in range(m2))
        base.append(lp.Constraint(coef, lp.EQ, ZERO))
    base.append(lp.Constraint(tuple(P1.b) + tuple(P2.b), lp.LE, ZERO))
    for i, sign in _normalizations(n):
        coef = tuple(P1.A[r][i] for r in range(m1)) + (ZERO,) * m2
        rel = lp.GE if sign > 0 else lp.LE
        cons = base + [lp.Constraint(coef, rel, Fraction(sign))]
        res = lp.solve(lp.LinearProgram(dim, cons, nonneg=True))
        if res.status == lp.OPTIMAL:
            lam = res.point[:m1]
            a = tuple(sum((lam[r] * P1.A[r][j] for r in range(m1)), ZERO) for j in range(n))
            b = dot(lam, P1.b)
            ia, ib = integral_row(a, b)
            return tuple(Fraction(x) for x in ia), Fraction(ib)
    return None


def continuous_weak_separation(C1: ConvexSet, C2: ConvexSet) -> Optional[Tuple[Vector, Fraction]]:
    """Exact ``(a, b)`` with ``C1 ⊆ {a.x <= b}`` and ``C2 ⊆ {a.x >= b}`` for ball or polyhedron pairs; None otherwise."""
    if isinstance(C1, Ball) and isinstance(C2, Ball):
        return _ball_pair(C1, C2)
    if isinstance(C1, HPolyhedron) and isinstance(C2, HPolyhedron):
        return _polyhedron_pair(C1, C2)
    return None
