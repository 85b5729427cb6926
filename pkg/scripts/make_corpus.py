"""Write the instance files under corpus/ and check each against the brute-force scan.

    python3 scripts/make_corpus.py [--out corpus]
"""

from __future__ import annotations

import argparse
import json
import os
from fractions import Fraction as F

from rcip.core import fmt, fmt_vec
from rcip.instance import instance_from_json
from rcip.int_feasibility import brute_force_points


def _poly(rows, name=""):
    out = {"type": "polyhedron", "A": [fmt_vec(a) for a, _ in rows], "b": [fmt(b) for _, b in rows]}
    if name:
        out["name"] = name
    return out


def _square(lo, hi, name=""):
    return _poly([((1, 0), hi), ((-1, 0), -lo), ((0, 1), hi), ((0, -1), -lo)], name)


def _ellipse(u_weight, v_weight, u, v, shift):
    """``u_weight (u.x')^2 + v_weight (v.x')^2 - 1 <= 0`` in ``x' = x - shift``, expanded to (Q, b, c)."""
    M = [[u_weight * u[i] * u[j] + v_weight * v[i] * v[j] for j in range(2)] for i in range(2)]
    Ms = [sum(M[i][j] * shift[j] for j in range(2)) for i in range(2)]
    b = [-2 * x for x in Ms]
    c = sum(s * m for s, m in zip(shift, Ms)) - 1
    return M, b, c


def _quadratic(Q, b, c, name):
    return {"type": "quadratic", "Q": [fmt_vec(r) for r in Q], "b": fmt_vec(b), "c": fmt(c), "name": name}


def pentagon():
    P = [((-1, -1), -1), ((-1, 1), 1), ((0, 1), 2), ((1, 0), 2), ((1, -1), 1)]
    Q1, b1, c1 = _ellipse(F(5, 64), F(4, 5), (2, 1), (-1, 2), (F(1), F(9, 5)))
    Q2 = [[Q1[1][1], Q1[1][0]], [Q1[0][1], Q1[0][0]]]
    b2 = [b1[1], b1[0]]
    # q1 - q2 = (x - y) * ((Q11 - Q22)(x + y) + (b1 - b2))
    k = Q1[0][0] - Q1[1][1]
    cover = {
        "hyperplanes": [
            {"a": ["1", "-1"], "b": "0"},
            {"a": [fmt(k), fmt(k)], "b": fmt(b2[0] - b1[0])},
        ]
    }
    return {
        "name": "pentagon",
        "dim": 2,
        "box": "3",
        "semantics": "open",
        "domains": [_poly(P, "P")],
        "removed": [_quadratic(Q1, b1, c1, "E1"), _quadratic(Q2, b2, c1, "E2")],
        "cover": cover,
    }


def pell(N=5, c=2, hi=12):
    return {
        "name": f"pell-n{N}",
        "dim": 2,
        "box": str(hi),
        "semantics": "open",
        "domains": [_square(1, hi, "B")],
        # survivors satisfy -c <= x^2 - N y^2 <= c
        "removed": [
            _quadratic([[1, 0], [0, -N]], [0, 0], c, "below"),
            _quadratic([[-1, 0], [0, N]], [0, 0], c, "above"),
        ],
    }


def an1(a, b, hi=10):
    """Lattice points with ``a x - b - y^2 = 0`` as K minus the closed set where the gap is at least one."""
    K = _quadratic([[0, 0], [0, 1]], [-a, 0], b, "K")
    C = _quadratic([[0, 0], [0, 1]], [-a, 0], b + 1, "C")
    return {
        "name": f"an1-a{a}-b{b}",
        "dim": 2,
        "box": str(hi),
        "semantics": "closed",
        "domains": [{"type": "intersection", "members": [K, _square(0, hi)], "name": "K"}],
        "removed": [C],
    }


def two_balls():
    return {
        "name": "two-balls",
        "dim": 2,
        "box": "2",
        "semantics": "open",
        "domains": [_square(-2, 2, "box")],
        "removed": [
            {"type": "ball", "center": ["0", "0"], "radius": "1", "name": "B1"},
            {"type": "ball", "center": ["1", "0"], "radius": "1", "name": "B2"},
        ],
    }


def two_ellipsoids():
    return {
        "name": "two-ellipsoids",
        "dim": 2,
        "box": "4",
        "semantics": "open",
        "domains": [_square(-4, 4, "box")],
        "removed": [
            _quadratic([[2, 1], [1, 3]], [0, 0], -6, "E1"),
            _quadratic([[1, 0], [0, 4]], [-2, -4], -3, "E2"),
        ],
    }


def polyhedra():
    return {
        "name": "polyhedra",
        "dim": 2,
        "box": "4",
        "semantics": "open",
        "domains": [_poly([((1, 0), 3), ((-1, 0), 3), ((0, 1), 3), ((0, -1), 3), ((1, 1), 4)], "K")],
        "removed": [
            _poly([((1, 0), 2), ((-1, 0), 3), ((0, 1), 1), ((0, -1), 4)], "Q1"),
            _poly([((1, 0), 4), ((-1, 0), 0), ((0, 1), 4), ((0, -1), 0), ((-1, 1), 1)], "Q2"),
        ],
    }


def three_lines():
    return {
        "dim": 2,
        "hyperplanes": [{"a": ["1", "0"], "b": "0"}, {"a": ["0", "1"], "b": "0"}, {"a": ["1", "1"], "b": "1"}],
    }


INSTANCES = {
    "pentagon.json": pentagon,
    "pell_n5.json": pell,
    "an1_yes.json": lambda: an1(5, 1),
    "an1_no.json": lambda: an1(5, 2),
    "two_balls.json": two_balls,
    "two_ellipsoids.json": two_ellipsoids,
    "polyhedra.json": polyhedra,
    "three_lines.json": three_lines,
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "corpus"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for fname, build in INSTANCES.items():
        data = build()
        with open(os.path.join(args.out, fname), "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
        if "hyperplanes" in data:
            print(f"{fname:<20} arrangement of {len(data['hyperplanes'])} hyperplanes")
            continue
        inst = instance_from_json(data)
        pts = brute_force_points(inst.domains, inst.removed, inst.dim, inst.box, inst.open_set)
        print(f"{fname:<20} {len(pts)} feasible points, first {pts[0] if pts else None}")


if __name__ == "__main__":
    main()
