"""End-to-end feasibility driver.

Routing by the shape of the instance:

* no removed sets: convex integer feasibility on each domain;
* one removed set and polyhedral domains: integer hull vertex test;
* only polyhedral removed sets: removing-polyhedra cells, then convex feasibility per cell;
* otherwise: boundary hyperplane cover, per-cell decomposition and the
  convex/concave subdivision dispatch (polyhedral domains, open semantics).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import lp
from .bhc import NoCoverAvailable, auto_cover
from .convex import ConvexQuadratic, ConvexSet, HPolyhedron, Intersection, NonconvexQuadratic, _polyhedral_and_curved
from .core import Refusal, check_guards, is_pd
from .decompose import Subdivision, decompose_bhc_integer, iter_removing_polyhedra, to_subdivision
from .instance import Instance, set_to_json
from .int_feasibility import brute_force_verdict, convex_int_feasible
from .integer_hull import enumerate_lattice, reverse_convex_feasible

FEASIBLE, INFEASIBLE = "feasible", "infeasible"

IntPoint = Tuple[int, ...]


@dataclass
class SolveConfig:
    canonical: bool = False
    verify: bool = False


@dataclass
class Verdict:
    status: str
    witness: Optional[IntPoint] = None
    route: str = ""
    trace: List[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    def to_json(self, timing: bool = True) -> dict:
        out = {"status": self.status, "witness": None if self.witness is None else list(self.witness), "route": self.route}
        stats = dict(self.stats)
        if not timing:
            stats.pop("seconds", None)
        out["stats"] = stats
        return out


class VerificationError(AssertionError):
    """The solver's answer disagreed with exact membership or with the brute-force scan."""


def _is_nonconvex(C: ConvexSet) -> bool:
    if isinstance(C, NonconvexQuadratic):
        return True
    if isinstance(C, Intersection):
        return any(_is_nonconvex(m) for m in C.members)
    return False


def point_is_feasible(inst: Instance, p) -> bool:
    x = tuple(Fraction(v) for v in p)
    if any(abs(v) > inst.box for v in x):
        return False
    if not any(K.contains(x) for K in inst.domains):
        return False
    if inst.open_set:
        return not any(C.contains_interior(x) for C in inst.removed)
    return not any(C.contains(x) for C in inst.removed)


def _boxed(inst: Instance, K: ConvexSet) -> ConvexSet:
    return Intersection((K, HPolyhedron.box(inst.dim, inst.box)))


def _polyhedral_clip(K: ConvexSet) -> Optional[HPolyhedron]:
    polys, _ = _polyhedral_and_curved(K)
    if not polys:
        return None
    P = polys[0]
    for q in polys[1:]:
        P = P.intersect(q)
    return P


def _pick(found: List[IntPoint], canonical: bool) -> Optional[IntPoint]:
    if not found:
        return None
    return min(found) if canonical else found[0]


def _route_convex(inst: Instance, cfg: SolveConfig, v: Verdict) -> Optional[IntPoint]:
    v.route = "convex"
    found = []
    for K in inst.domains:
        w = convex_int_feasible(_boxed(inst, K), inst.box)
        v.trace.append({"domain": K.name, "witness": None if w is None else list(w)})
        if w is not None:
            found.append(w)
    return min(found) if found else None


def _route_single(inst: Instance, cfg: SolveConfig, v: Verdict) -> Optional[IntPoint]:
    v.route = "integer-hull"
    C = inst.removed[0]
    found = []
    for K in inst.domains:
        if cfg.canonical:
            w = _first_lattice_point_outside(K.intersect(HPolyhedron.box(inst.dim, inst.box)), C, inst)
        else:
            w = reverse_convex_feasible(K, C, inst.box, open_set=inst.open_set)
        v.trace.append({"domain": K.name, "witness": None if w is None else list(w)})
        if w is not None:
            found.append(w)
            if not cfg.canonical:
                break
    return _pick(found, cfg.canonical)


def _first_lattice_point_outside(P: HPolyhedron, C: ConvexSet, inst: Instance) -> Optional[IntPoint]:
    removed = C.contains_interior if inst.open_set else C.contains
    for p in enumerate_lattice(P, inst.box).points:
        if not removed(tuple(Fraction(x) for x in p)):
            return p
    return None


def _route_polyhedra(inst: Instance, cfg: SolveConfig, v: Verdict) -> Optional[IntPoint]:
    v.route = "removing-polyhedra"
    found = []
    cells = 0
    for K in inst.domains:
        for T in iter_removing_polyhedra(K, inst.removed, inst.box, inst.open_set, clip=_polyhedral_clip(K)):
            cells += 1
            w = convex_int_feasible(Intersection((K, T)), inst.box)
            if w is not None:
                found.append(w)
                if not cfg.canonical:
                    break
        if found and not cfg.canonical:
            break
    v.stats["cells"] = cells
    return _pick(found, cfg.canonical)


def solve_subdivision(sub: Subdivision, inst: Instance, canonical: bool = False, trace: Optional[list] = None) -> Optional[IntPoint]:
    """Dispatch every piece to the matching oracle; first hit wins unless ``canonical``."""
    found = []
    for piece in sorted(sub.pieces, key=lambda p: (p.cell, p.component, p.region)):
        P = piece.polyhedron
        if piece.convex_part is None:
            w = convex_int_feasible(P, inst.box)
            kind = "convex"
        elif canonical or not piece.certified:
            w = None
            for p in enumerate_lattice(P, inst.box).points:
                if not piece.convex_part.contains(tuple(Fraction(x) for x in p)):
                    w = p
                    break
            kind = "concave-scan"
        else:
            w = reverse_convex_feasible(P, piece.convex_part, inst.box, open_set=False)
            kind = "concave"
        if trace is not None:
            trace.append({"cell": list(piece.cell), "component": piece.component, "oracle": kind, "witness": None if w is None else list(w)})
        if w is not None:
            found.append(w)
            if not canonical:
                break
    return _pick(found, canonical)


def _distinct(sets: List[ConvexSet]) -> List[int]:
    """Indices of the first occurrence of each distinct set."""
    out, keys = [], set()
    for i, C in enumerate(sets):
        d = set_to_json(C)
        d.pop("name", None)
        key = json.dumps(d, sort_keys=True)
        if key not in keys:
            keys.add(key)
            out.append(i)
    return out


def _route_bhc(inst: Instance, cfg: SolveConfig, v: Verdict) -> Optional[IntPoint]:
    v.route = "boundary-cover"
    if not all(isinstance(K, HPolyhedron) for K in inst.domains):
        raise Refusal("curved removed sets need polyhedral domains")
    if not inst.open_set:
        raise Refusal("closed removal of several curved sets is not supported; use open semantics")
    for C in inst.removed:
        if isinstance(C, ConvexQuadratic) and not is_pd(C.Q):
            raise Refusal(f"removed quadratic {C.name or ''} must be bounded (positive definite)")
    removed = list(inst.removed)
    cover = inst.cover
    if cover is None:
        # repeated sets leave the union unchanged but have no finite cover
        keep = _distinct(removed)
        removed = [inst.removed[i] for i in keep]
        forms = {k: inst.forms[i] for k, i in enumerate(keep) if i in (inst.forms or {})}
        try:
            cover = auto_cover(removed, forms)
        except NoCoverAvailable as exc:
            raise Refusal(f"no boundary hyperplane cover available: {exc}") from exc
    found = []
    npieces = 0
    for K in inst.domains:
        pieces = decompose_bhc_integer(removed, cover, inst.box, clip=K)
        sub = to_subdivision(pieces, K, inst.box)
        npieces += len(sub.pieces)
        w = solve_subdivision(sub, inst, cfg.canonical, v.trace)
        if w is not None:
            found.append(w)
            if not cfg.canonical:
                break
    v.stats["pieces"] = npieces
    return _pick(found, cfg.canonical)


def solve(inst: Instance, config: Optional[SolveConfig] = None) -> Verdict:
    """Decide whether the instance has an integer point and return one if so."""
    cfg = config or SolveConfig()
    check_guards(inst.dim, inst.box)
    if any(_is_nonconvex(C) for C in (*inst.domains, *inst.removed)):
        raise Refusal("instance contains a non-convex set; only the brute-force oracle accepts it")
    start = time.perf_counter()
    lp_before = lp.stats()
    v = Verdict(INFEASIBLE)
    m = len(inst.removed)
    polyhedral_domains = all(isinstance(K, HPolyhedron) for K in inst.domains)
    if m == 0:
        w = _route_convex(inst, cfg, v)
    elif m == 1 and polyhedral_domains:
        w = _route_single(inst, cfg, v)
    elif all(isinstance(C, HPolyhedron) for C in inst.removed):
        w = _route_polyhedra(inst, cfg, v)
    else:
        w = _route_bhc(inst, cfg, v)
    if w is not None:
        if not point_is_feasible(inst, w):
            raise VerificationError(f"witness {w} fails the instance membership test")
        v.status, v.witness = FEASIBLE, tuple(w)
    lp_after = lp.stats()
    v.stats["lps"] = lp_after["lps"] - lp_before["lps"]
    v.stats["pivots"] = lp_after["pivots"] - lp_before["pivots"]
    v.stats["seconds"] = round(time.perf_counter() - start, 4)
    if cfg.verify:
        ref = brute_force_verdict(inst.domains, inst.removed, inst.dim, inst.box, inst.open_set)
        if (ref is None) != (w is None) or (cfg.canonical and ref is not None and tuple(ref) != v.witness):
            raise VerificationError(f"solver says {v.status} {v.witness}, brute force says {ref}")
        v.stats["verified"] = True
    return v
