"""Seeded random instances for agreement testing against the brute-force oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .convex import Ball, ConvexSet, HPolyhedron
from .instance import OPEN, Instance


@dataclass
class GeneratorConfig:
    dim: int = 2
    box: int = 6
    max_removed: int = 3
    kinds: Sequence[str] = ("ball", "polyhedron")
    extra_rows: int = 2  # random cutting rows on top of an axis-aligned box
    semantics: str = OPEN


def _interval(rng: random.Random, R: int, min_len: int = 1):
    lo = rng.randint(-R, R - min_len)
    hi = rng.randint(lo + min_len, R)
    return lo, hi


def random_polytope(rng: random.Random, n: int, R: int, extra_rows: int = 2, name: str = "") -> HPolyhedron:
    """An axis-aligned box inside ``[-R, R]^n`` cut by a few random rows through its interior."""
    rows = []
    centre = []
    for i in range(n):
        lo, hi = _interval(rng, R)
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), hi))
        rows.append((tuple(-x for x in e), -lo))
        centre.append(Fraction(lo + hi, 2))
    for _ in range(rng.randint(0, extra_rows)):
        a = [rng.randint(-3, 3) for _ in range(n)]
        if not any(a):
            continue
        # keep the box centre strictly inside
        val = sum(Fraction(x) * c for x, c in zip(a, centre))
        rows.append((tuple(a), val + Fraction(rng.randint(1, 2 * R), 2)))
    return HPolyhedron.from_rows(rows, name)


def random_ball(rng: random.Random, n: int, R: int, name: str = "") -> Ball:
    centre = [Fraction(rng.randint(-2 * R, 2 * R), 2) for _ in range(n)]
    radius = Fraction(rng.randint(1, 2 * R), rng.choice((2, 3, 4)))
    return Ball(centre, radius, name)


def _bounds(P: HPolyhedron):
    """Axis ranges of an axis-aligned box polytope produced by :func:`random_polytope`."""
    n = P.dim
    lo, hi = [None] * n, [None] * n
    for a, b in P.rows()[: 2 * n]:
        i = next(k for k, v in enumerate(a) if v != 0)
        if a[i] > 0:
            hi[i] = b
        else:
            lo[i] = -b
    return lo, hi


def random_removed(rng: random.Random, kind: str, n: int, R: int, name: str = "", around: HPolyhedron = None) -> ConvexSet:
    """A random ball or polytope; with ``around`` it is placed inside that box so that it bites."""
    if around is None:
        if kind == "ball":
            return random_ball(rng, n, R, name)
        if kind == "polyhedron":
            return random_polytope(rng, n, max(1, R), extra_rows=1, name=name)
        raise ValueError(f"unknown removed-set kind {kind!r}")
    lo, hi = _bounds(around)
    if kind == "ball":
        centre = [Fraction(rng.randint(int(2 * l), int(2 * h)), 2) for l, h in zip(lo, hi)]
        width = max(h - l for l, h in zip(lo, hi))
        den = rng.choice((1, 2, 3, 4))
        radius = Fraction(rng.randint(max(1, den // 2), max(1, int(width * den))), den)
        return Ball(centre, radius, name)
    if kind == "polyhedron":
        rows = []
        for i in range(n):
            a = rng.randint(int(2 * lo[i]), int(2 * hi[i]))
            b = rng.randint(a, int(2 * hi[i]) + 1)
            e = [0] * n
            e[i] = 1
            rows.append((tuple(e), Fraction(b, 2)))
            rows.append((tuple(-x for x in e), -Fraction(a, 2)))
        if rng.random() < 0.5:
            a = [rng.randint(-2, 2) for _ in range(n)]
            if any(a):
                mid = [Fraction(l + h, 2) for l, h in zip(lo, hi)]
                rows.append((tuple(a), sum(x * c for x, c in zip(a, mid)) + Fraction(rng.randint(0, 4), 2)))
        return HPolyhedron.from_rows(rows, name)
    raise ValueError(f"unknown removed-set kind {kind!r}")


def random_instance(seed: int, config: GeneratorConfig = None) -> Instance:
    cfg = config or GeneratorConfig()
    rng = random.Random(seed)
    n, R = cfg.dim, cfg.box
    domain = random_polytope(rng, n, R, cfg.extra_rows, name="K")
    m = rng.randint(0, cfg.max_removed)
    kind = rng.choice(list(cfg.kinds))
    mixed = len(cfg.kinds) > 1 and rng.random() < 0.3
    removed = []
    for i in range(m):
        k = rng.choice(list(cfg.kinds)) if mixed else kind
        removed.append(random_removed(rng, k, n, R, name=f"C{i + 1}", around=domain))
    return Instance(n, Fraction(R), [domain], removed, cfg.semantics, name=f"random-{seed}")
