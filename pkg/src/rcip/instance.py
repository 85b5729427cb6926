"""Problem instances and their JSON encoding.

An instance asks for an integer point of ``(K_1 ∪ ... ∪ K_l) \\ (C_1 ∪ ... ∪ C_m)``
inside the box ``[-R, R]^n``.  With ``"semantics": "open"`` the removed sets
are the interiors of the ``C_i``; with ``"closed"`` they are the closed sets.
Rationals are written as strings ``"p/q"`` or integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .arrangement import Hyperplane
from .bhc import Affine, BoundaryCover, CoverPair, QuadraticBhcForm, quadratic_from_form
from .convex import Ball, ConvexQuadratic, ConvexSet, HPolyhedron, Intersection, NonconvexQuadratic, UnionConvex
from .core import fmt, fmt_vec, frac, is_psd, mat, vec

OPEN, CLOSED = "open", "closed"


class InstanceError(ValueError):
    """Malformed instance data."""


@dataclass
class Instance:
    dim: int
    box: Fraction
    domains: List[ConvexSet]
    removed: List[ConvexSet] = field(default_factory=list)
    semantics: str = OPEN
    cover: Optional[BoundaryCover] = None
    forms: Dict[int, QuadraticBhcForm] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.box = frac(self.box)
        if self.dim < 1:
            raise InstanceError("dimension must be positive")
        if self.box < 0:
            raise InstanceError("box radius must be non-negative")
        if self.semantics not in (OPEN, CLOSED):
            raise InstanceError(f"semantics must be 'open' or 'closed', not {self.semantics!r}")
        if not self.domains:
            raise InstanceError("at least one domain set is required")
        for s in (*self.domains, *self.removed):
            if s.dim != self.dim:
                raise InstanceError(f"set {s.name or type(s).__name__} has dimension {s.dim}, expected {self.dim}")

    @property
    def open_set(self) -> bool:
        return self.semantics == OPEN


# -- decoding ----------------------------------------------------------------


def _need(d: dict, key: str):
    if key not in d:
        raise InstanceError(f"missing field {key!r} in {d!r}")
    return d[key]


def set_from_json(d: dict) -> ConvexSet:
    kind = _need(d, "type")
    name = d.get("name", "")
    try:
        if kind == "ball":
            return Ball(vec(_need(d, "center")), frac(_need(d, "radius")), name)
        if kind == "quadratic":
            Q, b, c = mat(_need(d, "Q")), vec(_need(d, "b")), frac(_need(d, "c"))
            if is_psd(Q):
                return ConvexQuadratic(Q, b, c, name)
            return NonconvexQuadratic(Q, b, c, name)
        if kind == "polyhedron":
            return HPolyhedron(mat(_need(d, "A")), vec(_need(d, "b")), name)
        if kind == "intersection":
            return Intersection(tuple(set_from_json(m) for m in _need(d, "members")), name)
        if kind == "quadratic_form":
            q, _ = quadratic_from_form(form_from_json(d), name)
            return q
    except InstanceError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InstanceError(f"bad {kind} set: {exc}") from exc
    raise InstanceError(f"unknown set type {kind!r}")


def form_from_json(d: dict) -> QuadraticBhcForm:
    h1 = _need(d, "h1")
    h2 = d.get("h2")
    return QuadraticBhcForm(
        frac(_need(d, "alpha")),
        Affine(vec(_need(h1, "a")), frac(h1.get("c", 0))),
        None if h2 is None else Affine(vec(_need(h2, "a")), frac(h2.get("c", 0))),
    )


def cover_from_json(d: dict, n: int) -> BoundaryCover:
    planes = [Hyperplane(vec(_need(h, "a")), frac(_need(h, "b"))) for h in d.get("hyperplanes", [])]
    for h in planes:
        if len(h.a) != n:
            raise InstanceError("cover hyperplane has the wrong dimension")
    cover = BoundaryCover()
    pairs = d.get("pairs")
    if pairs is None:
        cover.hyperplanes = planes
        return cover
    cover.hyperplanes = planes
    for p in pairs:
        i, j = int(_need(p, "i")), int(_need(p, "j"))
        idx = [int(k) for k in p.get("hyperplanes", range(len(planes)))]
        if any(k < 0 or k >= len(planes) for k in idx):
            raise InstanceError("cover pair refers to a missing hyperplane")
        cover.pairs[(min(i, j), max(i, j))] = CoverPair(idx, bool(p.get("ideal", False)))
    return cover


def instance_from_json(d: dict) -> Instance:
    try:
        n = int(_need(d, "dim"))
        box = frac(_need(d, "box"))
        domains = [set_from_json(s) for s in _need(d, "domains")]
        removed_raw = d.get("removed", [])
        removed = [set_from_json(s) for s in removed_raw]
        forms = {i: form_from_json(s) for i, s in enumerate(removed_raw) if s.get("type") == "quadratic_form"}
        cover = cover_from_json(d["cover"], n) if d.get("cover") is not None else None
        return Instance(n, box, domains, removed, d.get("semantics", OPEN), cover, forms, d.get("name", ""))
    except InstanceError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InstanceError(str(exc)) from exc


def load_instance(path: str) -> Instance:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from exc
    return instance_from_json(data)


# -- encoding ----------------------------------------------------------------


def set_to_json(C: ConvexSet) -> dict:
    if isinstance(C, Ball):
        out = {"type": "ball", "center": fmt_vec(C.center), "radius": fmt(C.radius)}
    elif isinstance(C, (ConvexQuadratic, NonconvexQuadratic)):
        out = {"type": "quadratic", "Q": [fmt_vec(r) for r in C.Q], "b": fmt_vec(C.b), "c": fmt(C.c)}
    elif isinstance(C, HPolyhedron):
        out = {"type": "polyhedron", "A": [fmt_vec(r) for r in C.A], "b": fmt_vec(C.b)}
    elif isinstance(C, Intersection):
        out = {"type": "intersection", "members": [set_to_json(m) for m in C.members]}
    elif isinstance(C, UnionConvex):
        out = {
            "type": "union",
            "cell": set_to_json(C.cell),
            "members": [set_to_json(m) for m in C.members],
            "certificate": C.certificate,
        }
    else:
        raise TypeError(f"cannot encode {type(C).__name__}")
    if C.name:
        out["name"] = C.name
    return out


def hyperplane_to_json(h: Hyperplane) -> dict:
    return {"a": fmt_vec(h.a), "b": fmt(h.b)}


def cover_to_json(cover: BoundaryCover) -> dict:
    return {
        "hyperplanes": [hyperplane_to_json(h) for h in cover.hyperplanes],
        "pairs": [
            {"i": i, "j": j, "hyperplanes": p.hyperplanes, "ideal": p.ideal} for (i, j), p in sorted(cover.pairs.items())
        ],
    }


def form_to_json(f: QuadraticBhcForm, name: str = "") -> dict:
    out = {"type": "quadratic_form", "alpha": fmt(f.alpha), "h1": {"a": fmt_vec(f.h1.a), "c": fmt(f.h1.c)}}
    if f.h2 is not None:
        out["h2"] = {"a": fmt_vec(f.h2.a), "c": fmt(f.h2.c)}
    if name:
        out["name"] = name
    return out


def instance_to_json(inst: Instance) -> dict:
    out = {
        "name": inst.name,
        "dim": inst.dim,
        "box": fmt(inst.box),
        "semantics": inst.semantics,
        "domains": [set_to_json(s) for s in inst.domains],
        "removed": [
            form_to_json(inst.forms[i], s.name) if i in inst.forms else set_to_json(s) for i, s in enumerate(inst.removed)
        ],
    }
    if inst.cover is not None:
        out["cover"] = cover_to_json(inst.cover)
    return out
