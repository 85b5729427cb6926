"""Exact rational linear programming.

A dense two-phase tableau simplex over Fractions with Bland's anti-cycling
rule.  Sizes here are tiny (a handful of variables, a few dozen rows), so a
dense tableau is fine; every returned point satisfies its constraints exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import ZERO, ONE, Vector, dot, frac, vec

LE, GE, EQ = "<=", ">=", "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    a: Vector
    rel: str
    b: Fraction

    def __post_init__(self):
        if self.rel not in (LE, GE, EQ):
            raise ValueError(f"bad relation {self.rel!r}")

    def satisfied(self, x: Sequence[Fraction]) -> bool:
        v = dot(self.a, x)
        if self.rel == LE:
            return v <= self.b
        if self.rel == GE:
            return v >= self.b
        return v == self.b


def le(a, b) -> Constraint:
    return Constraint(vec(a), LE, frac(b))


def ge(a, b) -> Constraint:
    return Constraint(vec(a), GE, frac(b))


def eq(a, b) -> Constraint:
    return Constraint(vec(a), EQ, frac(b))


@dataclass
class LinearProgram:
    """``constraints`` over ``dim`` variables; ``objective`` is ``("min"|"max", c)`` or None.

    Variables are free unless ``nonneg`` is set, in which case all are >= 0.
    """

    dim: int
    constraints: List[Constraint] = field(default_factory=list)
    objective: Optional[Tuple[str, Vector]] = None
    nonneg: bool = False

    def __post_init__(self):
        for c in self.constraints:
            if len(c.a) != self.dim:
                raise ValueError("constraint dimension does not match the program")
        if self.objective is not None:
            sense, c = self.objective
            if sense not in ("min", "max") or len(c) != self.dim:
                raise ValueError("malformed objective")


@dataclass
class LpResult:
    status: str
    point: Optional[Vector] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


# a global pivot counter is handy for the solver's statistics
_stats = {"lps": 0, "pivots": 0}


def stats() -> dict:
    return dict(_stats)


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.T = rows  # list of lists (length ncols)
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        _stats["pivots"] += 1
        T = self.T
        row = T[r]
        pv = row[c]
        if pv != 1:
            row = [x / pv if x else x for x in row]
            T[r] = row
            self.rhs[r] /= pv
        nz = [j for j, x in enumerate(row) if x]
        rr = self.rhs[r]
        for i in range(len(T)):
            if i == r:
                continue
            Ti = T[i]
            f = Ti[c]
            if not f:
                continue
            for j in nz:
                Ti[j] -= f * row[j]
            self.rhs[i] -= f * rr
        self.basis[r] = c

    def minimize(self, cost: Sequence[Fraction], allowed: Sequence[bool]) -> str:
        """Minimise ``cost . y`` from the current feasible basis; Bland's rule."""
        T, rhs, basis = self.T, self.rhs, self.basis
        ncols = self.ncols
        while True:
            # reduced costs r_j = c_j - sum_i c_B(i) T[i][j]
            red = list(cost)
            for i, bi in enumerate(basis):
                cb = cost[bi]
                if cb:
                    Ti = T[i]
                    for j in range(ncols):
                        if Ti[j]:
                            red[j] -= cb * Ti[j]
            enter = next((j for j in range(ncols) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i in range(len(T)):
                a = T[i][enter]
                if a > 0:
                    ratio = rhs[i] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def solve(lp: LinearProgram) -> LpResult:
    """Solve a linear program exactly.

    Status is ``optimal`` (also used for a satisfied feasibility query),
    ``infeasible`` or ``unbounded``.  Programs in free variables are solved
    through their dual, whose tableau has one row per variable instead of one
    per constraint.
    """
    _stats["lps"] += 1
    if not lp.nonneg:
        return _solve_via_dual(lp)
    return _solve_primal(lp)


def _as_le_rows(lp: LinearProgram):
    rows = []
    for con in lp.constraints:
        if con.rel in (LE, EQ):
            rows.append((list(con.a), con.b))
        if con.rel in (GE, EQ):
            rows.append(([-x for x in con.a], -con.b))
    return rows


def _dual_tableau(rows, c, n):
    """Optimise ``min b.y`` s.t. ``A^T y = c``, ``y >= 0``; returns (status, multipliers)."""
    m = len(rows)
    flip = [ONE if c[i] >= 0 else -ONE for i in range(n)]
    ncols = m + n
    T = []
    for i in range(n):
        f = flip[i]
        row = [f * rows[j][0][i] for j in range(m)] + [ZERO] * n
        row[m + i] = ONE
        T.append(row)
    tab = _Tableau(T, [flip[i] * c[i] for i in range(n)], [m + i for i in range(n)], ncols)
    is_art = [j >= m for j in range(ncols)]
    tab.minimize([ZERO] * m + [ONE] * n, [True] * ncols)
    if any(tab.rhs[i] > 0 for i, bi in enumerate(tab.basis) if is_art[bi]):
        return INFEASIBLE, None
    for i in range(n):
        if is_art[tab.basis[i]]:
            j = next((j for j in range(m) if tab.T[i][j] != 0), None)
            if j is not None:
                tab.pivot(i, j)
    cost = [rows[j][1] for j in range(m)] + [ZERO] * n
    status = tab.minimize(cost, [not a for a in is_art])
    if status == UNBOUNDED:
        return UNBOUNDED, None
    # simplex multipliers: the reduced cost of artificial column i is -pi'_i
    pi = [ZERO] * n
    for i, bi in enumerate(tab.basis):
        cb = cost[bi]
        if cb:
            Ti = tab.T[i]
            for k in range(n):
                if Ti[m + k]:
                    pi[k] += cb * Ti[m + k]
    return OPTIMAL, tuple(flip[k] * pi[k] for k in range(n))


def _solve_via_dual(lp: LinearProgram) -> LpResult:
    n = lp.dim
    rows = _as_le_rows(lp)
    if lp.objective is None:
        sense, c = "max", (ZERO,) * n
    else:
        sense, c = lp.objective
    sgn = ONE if sense == "max" else -ONE
    cmax = [sgn * x for x in c]
    if not rows:
        if any(cmax):
            return LpResult(UNBOUNDED)
        x = (ZERO,) * n
        return LpResult(OPTIMAL, x, None if lp.objective is None else ZERO)
    status, x = _dual_tableau(rows, cmax, n)
    if status == OPTIMAL:
        value = None if lp.objective is None else dot(lp.objective[1], x)
        return LpResult(OPTIMAL, x, value)
    if status == UNBOUNDED:
        return LpResult(INFEASIBLE)
    # the dual is infeasible: the primal is unbounded or infeasible
    status, _ = _dual_tableau(rows, [ZERO] * n, n)
    return LpResult(UNBOUNDED if status == OPTIMAL else INFEASIBLE)


def _solve_primal(lp: LinearProgram) -> LpResult:
    n = lp.dim
    nx = n if lp.nonneg else 2 * n  # free x = p - q
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    kinds = []
    for con in lp.constraints:
        a = list(con.a)
        b = con.b
        rel = con.rel
        if b < 0:
            a = [-x for x in a]
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        row = a if lp.nonneg else a + [-x for x in a]
        rows.append(row)
        rhs.append(b)
        kinds.append(rel)

    m = len(rows)
    n_slack = sum(1 for k in kinds if k != EQ)
    n_art = sum(1 for k in kinds if k != LE)
    ncols = nx + n_slack + n_art
    T = []
    basis = []
    s_col = nx
    a_col = nx + n_slack
    art_cols = []
    for row, kind in zip(rows, kinds):
        full = row + [ZERO] * (n_slack + n_art)
        if kind == LE:
            full[s_col] = ONE
            basis.append(s_col)
            s_col += 1
        else:
            if kind == GE:
                full[s_col] = -ONE
                s_col += 1
            full[a_col] = ONE
            basis.append(a_col)
            art_cols.append(a_col)
            a_col += 1
        T.append(full)
    tab = _Tableau(T, list(rhs), basis, ncols)
    is_art = [False] * ncols
    for c in art_cols:
        is_art[c] = True

    if art_cols:
        cost1 = [ONE if is_art[j] else ZERO for j in range(ncols)]
        tab.minimize(cost1, [True] * ncols)
        infeas = sum((tab.rhs[i] for i, bi in enumerate(tab.basis) if is_art[bi]), ZERO)
        if infeas > 0:
            return LpResult(INFEASIBLE)
        # drive remaining (zero-level) artificials out of the basis
        i = 0
        while i < len(tab.T):
            if is_art[tab.basis[i]]:
                j = next((j for j in range(ncols) if not is_art[j] and tab.T[i][j] != 0), None)
                if j is None:
                    # redundant row
                    del tab.T[i]
                    del tab.rhs[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j)
            i += 1

    allowed = [not is_art[j] for j in range(ncols)]
    value = None
    if lp.objective is not None:
        sense, c = lp.objective
        sgn = ONE if sense == "min" else -ONE
        cvec = [sgn * x for x in c]
        cost2 = (cvec if lp.nonneg else cvec + [-x for x in cvec]) + [ZERO] * (ncols - nx)
        status = tab.minimize(cost2, allowed)
        if status == UNBOUNDED:
            return LpResult(UNBOUNDED)

    y = [ZERO] * ncols
    for i, bi in enumerate(tab.basis):
        y[bi] = tab.rhs[i]
    if lp.nonneg:
        x = tuple(y[:n])
    else:
        x = tuple(y[j] - y[n + j] for j in range(n))
    if lp.objective is not None:
        value = dot(lp.objective[1], x)
    return LpResult(OPTIMAL, x, value)


def feasible_point(dim: int, constraints: Sequence[Constraint]) -> Optional[Vector]:
    res = solve(LinearProgram(dim, list(constraints)))
    return res.point if res.status == OPTIMAL else None


def optimize(dim: int, constraints: Sequence[Constraint], sense: str, c) -> LpResult:
    return solve(LinearProgram(dim, list(constraints), (sense, vec(c))))


def interior_point(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[Vector]:
    """A point with ``A x < b`` in every row, or None when no strict interior exists.

    Solved as ``max t`` subject to ``A x + t 1 <= b`` and ``0 <= t <= 1``; an
    interior exists exactly when the optimal ``t`` is positive.
    """
    if not A:
        raise ValueError("interior_point needs at least one row (the ambient dimension)")
    n = len(A[0])
    cons = [Constraint(tuple(row) + (ONE,), LE, frac(bi)) for row, bi in zip(A, b)]
    t_axis = (ZERO,) * n + (ONE,)
    cons.append(Constraint(t_axis, GE, ZERO))
    cons.append(Constraint(t_axis, LE, ONE))
    res = solve(LinearProgram(n + 1, cons, ("max", t_axis)))
    if res.status != OPTIMAL or res.point[-1] <= 0:
        return None
    return res.point[:-1]
