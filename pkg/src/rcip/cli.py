"""Command-line entry point: ``rcip {solve,decompose,cells,hull,check-bhc,oracle,generate}``.

Exit codes: 0 feasible (or success), 1 infeasible (or cover violations),
2 refusal, guard violation or malformed input, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from .arrangement import Arrangement, Hyperplane, maximal_cells
from .bhc import NoCoverAvailable, auto_cover, verify_cover
from .convex import HPolyhedron
from .core import GuardExceeded, Refusal, fmt, fmt_vec, frac, vec
from .decompose import decompose_bhc_integer, decompose_removing_polyhedra
from .generate import GeneratorConfig, random_instance
from .instance import InstanceError, cover_to_json, instance_to_json, load_instance, set_to_json
from .int_feasibility import brute_force_points, brute_force_verdict
from .integer_hull import enumerate_lattice, hull_vertices
from .solver import SolveConfig, solve

EXIT_OK, EXIT_INFEASIBLE, EXIT_REFUSED, EXIT_INTERNAL = 0, 1, 2, 3


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    v = solve(inst, SolveConfig(canonical=args.canonical, verify=args.verify))
    out = v.to_json(timing=not args.no_timing)
    if args.trace:
        out["trace"] = v.trace
    _emit(out)
    return EXIT_OK if v.feasible else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    w = brute_force_verdict(inst.domains, inst.removed, inst.dim, inst.box, inst.open_set)
    out = {"status": "feasible" if w is not None else "infeasible", "witness": None if w is None else list(w)}
    if args.all:
        out["points"] = [list(p) for p in brute_force_points(inst.domains, inst.removed, inst.dim, inst.box, inst.open_set)]
    _emit(out)
    return EXIT_OK if w is not None else EXIT_INFEASIBLE


def _piece_json(p) -> dict:
    return {
        "inequalities": [{"a": fmt_vec(a), "b": fmt(b)} for a, b in p.polyhedron.rows()],
        "convex_part": None if p.convex_part is None else set_to_json(p.convex_part),
        "members": list(p.members),
        "cell": list(p.cell),
        "component": p.component,
        "region": list(p.region),
        "certified": p.certified,
    }


def cmd_decompose(args) -> int:
    inst = load_instance(args.instance)
    if inst.removed and all(isinstance(C, HPolyhedron) for C in inst.removed):
        out = []
        for K in inst.domains:
            clip = K if isinstance(K, HPolyhedron) else None
            for T in decompose_removing_polyhedra(K, inst.removed, inst.box, inst.open_set, clip=clip):
                out.append({"inequalities": [{"a": fmt_vec(a), "b": fmt(b)} for a, b in T.rows()]})
        _emit({"engine": "removing-polyhedra", "cells": out})
        return EXIT_OK
    cover = inst.cover
    if cover is None:
        try:
            cover = auto_cover(inst.removed, inst.forms)
        except NoCoverAvailable as exc:
            raise Refusal(str(exc)) from exc
    pieces = []
    for K in inst.domains:
        clip = K if isinstance(K, HPolyhedron) else None
        pieces += decompose_bhc_integer(inst.removed, cover, inst.box, clip=clip)
    _emit({"engine": "boundary-cover", "cover": cover_to_json(cover), "pieces": [_piece_json(p) for p in pieces]})
    return EXIT_OK


def cmd_cells(args) -> int:
    with open(args.instance) as fh:
        data = json.load(fh)
    n = int(data["dim"])
    if "hyperplanes" in data:
        hs = [Hyperplane(vec(h["a"]), frac(h["b"])) for h in data["hyperplanes"]]
        box = data.get("box")
    else:
        inst = load_instance(args.instance)
        if inst.cover is None:
            raise InstanceError("file has neither hyperplanes nor a cover")
        hs, box = inst.cover.hyperplanes, inst.box
    arr = Arrangement(hs, n, None if box is None else frac(box))
    cells = maximal_cells(arr)
    _emit(
        {
            "count": len(cells),
            "cells": [
                {
                    "sign_vector": ["<=" if s < 0 else ">=" for s in c.signs],
                    "inequalities": [{"a": fmt_vec(a), "b": fmt(b)} for a, b in c.polyhedron.rows()],
                    "witness": fmt_vec(c.witness),
                }
                for c in cells
            ],
        }
    )
    return EXIT_OK


def cmd_hull(args) -> int:
    inst = load_instance(args.instance)
    polys = [K for K in inst.domains if isinstance(K, HPolyhedron)]
    if not polys:
        raise Refusal("hull needs a polyhedral domain")
    pts = enumerate_lattice(polys[0], inst.box)
    _emit([list(v) for v in hull_vertices(pts)] if pts.points else [])
    return EXIT_OK


def cmd_check_bhc(args) -> int:
    inst = load_instance(args.instance)
    cover = inst.cover
    if cover is None:
        try:
            cover = auto_cover(inst.removed, inst.forms)
        except NoCoverAvailable as exc:
            raise Refusal(str(exc)) from exc
    report = verify_cover(inst.removed, cover, samples=args.samples, seed=args.seed)
    _emit(
        {
            "ok": report.ok,
            "pairs_checked": report.pairs_checked,
            "samples": report.samples,
            "violations": [
                {"pair": list(v.pair), "point": None if v.point is None else fmt_vec(v.point), "reason": v.reason}
                for v in report.violations
            ],
        }
    )
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def cmd_generate(args) -> int:
    kinds = tuple(args.kinds.split(","))
    inst = random_instance(args.seed, GeneratorConfig(dim=args.dim, box=args.box, max_removed=args.max_removed, kinds=kinds))
    _emit(instance_to_json(inst))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rcip", description="Exact integer feasibility for polyhedra minus convex sets.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide feasibility and print a witness")
    s.add_argument("instance")
    s.add_argument("--canonical", action="store_true", help="return the lexicographically smallest witness")
    s.add_argument("--verify", action="store_true", help="cross-check against the brute-force scan")
    s.add_argument("--trace", action="store_true", help="include per-piece oracle outcomes")
    s.add_argument("--no-timing", action="store_true", help="omit wall-clock fields for reproducible output")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", help="brute-force scan of the box")
    s.add_argument("instance")
    s.add_argument("--all", action="store_true", help="list every feasible lattice point")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("decompose", help="print the polyhedral pieces")
    s.add_argument("instance")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("cells", help="maximal cells of a hyperplane arrangement")
    s.add_argument("instance")
    s.set_defaults(func=cmd_cells)

    s = sub.add_parser("hull", help="integer hull vertices of the first polyhedral domain")
    s.add_argument("instance")
    s.set_defaults(func=cmd_hull)

    s = sub.add_parser("check-bhc", help="verify the boundary hyperplane cover of the removed sets")
    s.add_argument("instance")
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_check_bhc)

    s = sub.add_parser("generate", help="print a random instance")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--dim", type=int, default=2)
    s.add_argument("--box", type=int, default=6)
    s.add_argument("--max-removed", type=int, default=3)
    s.add_argument("--kinds", default="ball,polyhedron", help="comma-separated subset of ball,polyhedron")
    s.set_defaults(func=cmd_generate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (Refusal, GuardExceeded, InstanceError) as exc:
        print(f"rcip: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"rcip: cannot read input: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except Exception as exc:  # noqa: BLE001 - reported as an internal error
        print(f"rcip: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
