"""JSON files for boundaries: a dual graph, optionally with Neron-Severi classes and centers.

A file is either a bare graph (``{"vertices": [...], "edges": [...]}``) or an object with
``graph``, ``rank``, ``classes`` (id -> coordinate list) and, for expanded boundaries,
``base`` (the boundary before expansion, same layout) and ``records`` (the centers used).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .expansion import ExpansionCenter
from .graph import DualGraph
from .lattice import DivisorClass, NSLattice


class SchemaError(ValueError):
    pass


@dataclass
class Boundary:
    graph: DualGraph
    lattice: NSLattice | None = None
    classes: dict | None = None
    base: "Boundary | None" = None
    records: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"graph": self.graph.to_dict()}
        if self.classes is not None:
            d["rank"] = self.lattice.rank
            d["classes"] = {k: list(self.classes[k].coords) for k in sorted(self.classes)}
        if self.base is not None:
            d["base"] = self.base.to_dict()
        if self.records:
            d["records"] = [center_to_dict(c) for c in self.records]
        d.update(self.meta)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def center_to_dict(c: ExpansionCenter) -> dict:
    return {"U": c.U, "W": c.W, "node": c.node, "weight": str(c.weight)}


def center_from_dict(d: dict) -> ExpansionCenter:
    try:
        return ExpansionCenter(d["U"], d["W"], Fraction(str(d["weight"])), d.get("node"))
    except KeyError as exc:
        raise SchemaError(f"center record lacks {exc.args[0]!r}") from None


def boundary_from_dict(d: dict) -> Boundary:
    if not isinstance(d, dict):
        raise SchemaError("expected a JSON object")
    try:
        if "graph" not in d:
            return Boundary(DualGraph.from_dict(d))
        g = DualGraph.from_dict(d["graph"])
        lat = classes = None
        if "classes" in d:
            lat = NSLattice(int(d["rank"]))
            classes = {k: DivisorClass(v) for k, v in d["classes"].items()}
            if any(len(c) != lat.rank for c in classes.values()):
                raise SchemaError("class length differs from rank")
        base = boundary_from_dict(d["base"]) if "base" in d else None
        recs = [center_from_dict(r) for r in d.get("records", [])]
        meta = {k: v for k, v in d.items() if k not in {"graph", "rank", "classes", "base", "records"}}
        return Boundary(g, lat, classes, base, recs, meta)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed boundary: {exc}") from None


def load_boundary(path) -> Boundary:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not JSON ({exc.msg})") from None
    return boundary_from_dict(d)
