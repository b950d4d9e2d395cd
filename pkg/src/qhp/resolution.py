"""Minimal log resolution of a line/conic arrangement.

Each singular point is resolved by a worklist of (possibly infinitely near) points. A
point carries the branches through it and their contact orders. Blowing it up lowers
every contact by one; branches still tangent to each other stay together and meet the
new exceptional curve at a common point, all others get separated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .arrangement import Arrangement, Component, SingularPoint, validate
from .graph import DualGraph, Edge, Vertex
from .lattice import DivisorClass, NSLattice, pair


@dataclass
class ResolutionResult:
    graph: DualGraph
    lattice: NSLattice
    classes: dict[str, DivisorClass]
    exceptional_order: dict[str, list[str]]
    parent_point: dict[str, str] = field(default_factory=dict)

    def check(self) -> list[str]:
        """Class/graph consistency and adjunction; returns a list of violations."""
        bad = []
        g, lat, cl = self.graph, self.lattice, self.classes
        K = lat.canonical_class
        ids = g.ids
        for i, a in enumerate(ids):
            if pair(lat, cl[a], cl[a]) != g.w(a):
                bad.append(f"{a}: self-pairing {pair(lat, cl[a], cl[a])} != weight {g.w(a)}")
            if pair(lat, K, cl[a]) != -2 - g.w(a):
                bad.append(f"{a}: adjunction fails")
            for b in ids[i + 1:]:
                if pair(lat, cl[a], cl[b]) != g.multiplicity(a, b):
                    bad.append(f"{a},{b}: pairing {pair(lat, cl[a], cl[b])} != {g.multiplicity(a, b)} edges")
        return bad


class InvalidArrangement(ValueError):
    pass


@dataclass
class _Pt:
    label: str  # arrangement point this is (infinitely) near to
    branches: list[str]
    contact: dict  # frozenset pair -> order; missing means 1
    node: str | None  # id for the edge if the point turns out to be a node


def _order(p: _Pt, a, b) -> int:
    return p.contact.get(frozenset((a, b)), 1)


def _is_snc(p: _Pt) -> bool:
    return len(p.branches) == 2 and _order(p, *p.branches) == 1


def minimal_log_resolution(arr: Arrangement, extra_blowups: Iterable[str] = (),
                           check_input: bool = True) -> ResolutionResult:
    """Blow up until the total transform is snc, and no further.

    ``extra_blowups`` names arrangement points that are blown up once more even when they
    are already nodes (points whose exceptional curve is later dropped from the boundary).
    """
    extra = set(extra_blowups)
    unknown = extra - {p.id for p in arr.points}
    if unknown:
        raise KeyError(f"unknown points {sorted(unknown)}")
    if check_input:
        rep = validate(arr)
        if not rep.ok:
            raise InvalidArrangement("; ".join(rep.issues()))
    classes: dict[str, list[int]] = {}
    weights_order = []
    tags = {}
    for c in arr.components:
        classes[c.id] = [c.degree]
        weights_order.append(c.id)
        tags[c.id] = {"line" if c.degree == 1 else "conic", "component"}
    n_blowups = 0
    edges: list[Edge] = []
    exc_order: dict[str, list[str]] = {}
    parent: dict[str, str] = {}

    def blow(p: _Pt):
        nonlocal n_blowups
        n_blowups += 1
        k = n_blowups
        for v in classes.values():
            v.append(0)
        for b in p.branches:
            classes[b][k] -= 1
        exc_order.setdefault(p.label, [])
        eid = f"E_{p.label}#{len(exc_order[p.label]) + 1}"
        exc_order[p.label].append(eid)
        classes[eid] = [0] * (k + 1)
        classes[eid][k] = 1
        weights_order.append(eid)
        tags[eid] = {"exceptional"}
        parent[eid] = p.label
        # regroup: tangency (contact >= 2) is an equivalence relation by the ultrametric law
        groups: list[list[str]] = []
        for b in p.branches:
            for grp in groups:
                if _order(p, b, grp[0]) >= 2:
                    grp.append(b)
                    break
            else:
                groups.append([b])
        out = []
        for grp in groups:
            contact = {}
            for i, a in enumerate(grp):
                for b in grp[i + 1:]:
                    contact[frozenset((a, b))] = _order(p, a, b) - 1
            out.append(_Pt(p.label, grp + [eid], contact, None))
        return out

    def process(p: _Pt, force: bool):
        stack = [p]
        while stack:
            q = stack.pop(0)
            if len(q.branches) < 2:
                continue
            if _is_snc(q) and not (force and q is p):
                a, b = q.branches
                edges.append(Edge(a, b, q.node))
                continue
            # children are handled depth first, in the order their groups were formed
            stack[:0] = blow(q)

    for sp in sorted(arr.points, key=lambda s: s.id):
        contact = {frozenset(k.split("|")): v for k, v in sp.contact.items() if v != 1}
        process(_Pt(sp.id, list(sp.branches), contact, sp.id), sp.id in extra)

    # rename exceptional curves: the last one over x is E_x, earlier ones E_x.k
    rename = {}
    for x, lst in exc_order.items():
        for i, eid in enumerate(lst):
            rename[eid] = f"E_{x}" if i == len(lst) - 1 else f"E_{x}.{i + 1}"
    lat = NSLattice(1 + n_blowups)
    final = {}
    for cid in weights_order:
        v = classes[cid]
        final[rename.get(cid, cid)] = DivisorClass(v + [0] * (lat.rank - len(v)))
    verts = [
        Vertex(rename.get(cid, cid), pair(lat, final[rename.get(cid, cid)], final[rename.get(cid, cid)]),
               frozenset(tags[cid]))
        for cid in weights_order
    ]
    edges = [Edge(rename.get(e.a, e.a), rename.get(e.b, e.b), e.node) for e in edges]
    g = DualGraph(verts, edges)
    return ResolutionResult(
        g, lat, final,
        {x: [rename[e] for e in lst] for x, lst in exc_order.items()},
        {rename[e]: x for e, x in parent.items()},
    )


def resolve_point(branches, contact: dict | None = None, separate: bool = False) -> ResolutionResult:
    """Resolve one point with smooth local branches, e.g. contact={"a|b": 5}.

    With ``separate`` the point is blown up even if it is already a node, so that no two
    branches meet afterwards.

    The branches are germs, so the global checks (Bezout, contact bounds for lines and
    conics) are skipped and only the local blowup pattern is meaningful.
    """
    arr = Arrangement([Component(b, 1) for b in branches], [SingularPoint("x", tuple(branches), dict(contact or {}))])
    return minimal_log_resolution(arr, ["x"] if separate else (), check_input=False)


def blowup_count(res: ResolutionResult, point_id: str) -> int:
    if point_id not in res.exceptional_order and point_id not in _known_points(res):
        raise KeyError(point_id)
    return len(res.exceptional_order.get(point_id, []))


def _known_points(res: ResolutionResult) -> set:
    return {e.node for e in res.graph.edges if e.node} | set(res.exceptional_order)
