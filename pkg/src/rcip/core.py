"""Exact rational scalars, vectors and the small linear-algebra kernels used everywhere.

Scalars are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  Vectors are tuples of Fractions, matrices are tuples of row
tuples.  Nothing in this module ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence, Tuple

Rational = Fraction
Vector = Tuple[Fraction, ...]
Matrix = Tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` or ``"-2"`` to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        # floats are accepted only when they are exactly representable small values
        f = Fraction(x)
        if f.denominator > 2**20:
            raise ValueError(f"refusing inexact float {x!r}; pass a 'p/q' string")
        return f
    raise TypeError(f"cannot interpret {x!r} as a rational")


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vec(r) for r in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("matrix rows have different lengths")
    return m


def fmt(q: Fraction) -> str:
    q = frac(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fmt_vec(v: Sequence[Fraction]) -> list:
    return [fmt(x) for x in v]


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int, sign: int = 1) -> Vector:
    return tuple(Fraction(sign) if j == i else ZERO for j in range(n))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def norm_sq(v: Sequence[Fraction]) -> Fraction:
    return sum((x * x for x in v), ZERO)


def add(u, v) -> Vector:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> Vector:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v) -> Vector:
    c = frac(c)
    return tuple(c * x for x in v)


def lerp(u, v, t) -> Vector:
    """Point ``u + t (v - u)``."""
    t = frac(t)
    return tuple(a + t * (b - a) for a, b in zip(u, v))


def mat_vec(A: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, x) for row in A)


def transpose(A: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*A))


def is_integral(v: Sequence[Fraction]) -> bool:
    return all(x.denominator == 1 for x in v)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integral_row(a: Sequence[Fraction], b: Fraction) -> Tuple[Tuple[int, ...], int]:
    """Scale the inequality ``a.x <= b`` by a positive factor so that it is integral and primitive."""
    den = 1
    for x in (*a, b):
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in (*a, b)]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(ints[:-1]), ints[-1]


def primitive_direction(a: Sequence[Fraction], b: Fraction) -> Tuple[Vector, Fraction]:
    """Canonical representative of the hyperplane ``a.x = b`` up to any non-zero scaling."""
    ia, ib = integral_row(a, b)
    lead = next(x for x in ia if x != 0)
    if lead < 0:
        ia, ib = tuple(-x for x in ia), -ib
    return tuple(Fraction(x) for x in ia), Fraction(ib)


def floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def sqrt_bounds(q: Fraction, bits: int = 40) -> Tuple[Fraction, Fraction]:
    """Rationals ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-bits``; exact for rational squares."""
    q = frac(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    p, d = q.numerator, q.denominator
    rp, rd = isqrt(p), isqrt(d)
    if rp * rp == p and rd * rd == d:
        r = Fraction(rp, rd)
        return r, r
    s = 1 << bits
    # sqrt(p/d) = sqrt(p*d)/d
    num = isqrt(p * d * s * s)
    lo = Fraction(num, d * s)
    hi = Fraction(num + 1, d * s)
    return lo, hi


def solve_linear(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Tuple[Optional[Vector], int]:
    """Solve ``A x = b`` exactly by Gauss-Jordan elimination.

    Returns ``(x, rank)``; ``x`` is ``None`` when the system is inconsistent.
    Free variables are set to zero, so the returned solution is a basic one.
    """
    m = len(A)
    if m != len(b):
        raise ValueError("row count of A does not match b")
    n = len(A[0]) if m else 0
    M = [list(map(frac, row)) + [frac(bi)] for row, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        if pv != 1:
            M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [x - f * y for x, y in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    rank = r
    for i in range(rank, m):
        if M[i][n] != 0:
            return None, rank
    x = [ZERO] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return tuple(x), rank


def rank(A: Sequence[Sequence[Fraction]]) -> int:
    if not A:
        return 0
    return solve_linear(A, [ZERO] * len(A))[1]


def _symmetric_pivots(M: Sequence[Sequence[Fraction]]):
    """Run symmetric Gaussian elimination with diagonal pivoting.

    Yields the pivots of an LDL^T factorisation.  Yields ``None`` once if a
    zero diagonal faces a non-zero off-diagonal entry (the matrix is then
    indefinite, since the 2x2 minor [[0, x], [x, *]] has negative determinant).
    """
    A = [list(map(frac, r)) for r in M]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError("matrix must be symmetric")
    idx = list(range(n))
    while idx:
        # largest diagonal entry as the pivot (symmetric pivoting)
        k = max(idx, key=lambda t: A[t][t])
        d = A[k][k]
        if d <= 0:
            if d < 0 or any(A[i][j] != 0 for i in idx for j in idx):
                # negative diagonal, or zero diagonal with non-zero coupling
                if any(A[t][t] < 0 for t in idx):
                    yield Fraction(-1)
                else:
                    yield None
                return
            for _ in idx:
                yield ZERO
            return
        yield d
        idx.remove(k)
        col = {i: A[i][k] for i in idx}
        for i in idx:
            if col[i] == 0:
                continue
            f = col[i] / d
            Ai = A[i]
            for j in idx:
                if col[j] != 0:
                    Ai[j] -= f * col[j]


def ldl_pivots(M: Sequence[Sequence[Fraction]]) -> list:
    """Diagonal of the pivoted LDL^T factorisation (``None`` marks an indefinite break-down)."""
    return list(_symmetric_pivots(M))


def is_psd(M: Sequence[Sequence[Fraction]]) -> bool:
    return all(p is not None and p >= 0 for p in _symmetric_pivots(M))


def is_pd(M: Sequence[Sequence[Fraction]]) -> bool:
    piv = ldl_pivots(M)
    return len(piv) == len(M) and all(p is not None and p > 0 for p in piv)


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


class GuardExceeded(RuntimeError):
    """Raised when an instance is larger than the exact desk-scale routines allow."""


class Refusal(ValueError):
    """Raised when an instance falls outside the supported classes."""


MAX_DIM = 4
MAX_RADIUS = 64


def check_guards(n: int, R) -> None:
    if n > MAX_DIM:
        raise GuardExceeded(f"dimension {n} exceeds the limit {MAX_DIM}")
    if frac(R) > MAX_RADIUS:
        raise GuardExceeded(f"box radius {R} exceeds the limit {MAX_RADIUS}")
