"""Compare the solver with the brute-force lattice scan on seeded random instances.

    python3 scripts/agreement.py --count 250 --dims 2,3 --box 8,5 --json agreement.json
"""

from __future__ import annotations

import argparse
import collections
import json
import time

from rcip.generate import GeneratorConfig, random_instance
from rcip.int_feasibility import brute_force_verdict
from rcip.solver import solve


def run(count: int, dims, boxes, seed0: int = 0):
    rows = []
    per_dim = [count // len(dims) + (1 if i < count % len(dims) else 0) for i in range(len(dims))]
    for dim, box, k in zip(dims, boxes, per_dim):
        cfg = GeneratorConfig(dim=dim, box=box, max_removed=3)
        for seed in range(seed0, seed0 + k):
            inst = random_instance(seed, cfg)
            t = time.perf_counter()
            v = solve(inst)
            dt = time.perf_counter() - t
            ref = brute_force_verdict(inst.domains, inst.removed, dim, inst.box, inst.open_set)
            rows.append(
                {
                    "dim": dim,
                    "seed": seed,
                    "removed": len(inst.removed),
                    "route": v.route,
                    "status": v.status,
                    "oracle": "feasible" if ref is not None else "infeasible",
                    "seconds": round(dt, 4),
                }
            )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=250)
    ap.add_argument("--dims", default="2,3")
    ap.add_argument("--box", default="8,5", help="box radius per dimension entry")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write per-instance rows here")
    args = ap.parse_args()
    dims = [int(x) for x in args.dims.split(",")]
    boxes = [int(x) for x in args.box.split(",")]
    t = time.perf_counter()
    rows = run(args.count, dims, boxes, args.seed)
    total = time.perf_counter() - t
    bad = [r for r in rows if r["status"] != r["oracle"]]
    mix = collections.Counter((r["dim"], r["route"], r["status"]) for r in rows)
    for key, c in sorted(mix.items()):
        print(f"n={key[0]} {key[1]:<20} {key[2]:<10} {c}")
    slow = sorted(rows, key=lambda r: -r["seconds"])[:5]
    print("slowest:", [(r["dim"], r["seed"], r["route"], r["seconds"]) for r in slow])
    print(f"{len(rows)} instances, {len(bad)} disagreements, {total:.1f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
