"""Combinatorial line/conic arrangements: components, singular points and contact orders."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path


def pair_key(a: str, b: str) -> str:
    return f"{a}|{b}" if a <= b else f"{b}|{a}"


@dataclass(frozen=True)
class Component:
    id: str
    degree: int

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise ValueError(f"component {self.id}: degree must be 1 or 2, got {self.degree}")


@dataclass(frozen=True)
class SingularPoint:
    """A point where at least two smooth branches meet.

    ``contact`` maps canonical pair keys "A|B" to contact orders; missing pairs are transverse.
    """

    id: str
    branches: tuple[str, ...]
    contact: dict = field(default_factory=dict, hash=False, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "contact", {pair_key(*k.split("|")): int(v) for k, v in self.contact.items()})

    def order(self, a: str, b: str) -> int:
        return self.contact.get(pair_key(a, b), 1)

    def pairs(self):
        return itertools.combinations(self.branches, 2)


@dataclass
class ValidationReport:
    bezout: list = field(default_factory=list)
    ultrametric: list = field(default_factory=list)
    contact_bounds: list = field(default_factory=list)
    structure: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.bezout or self.ultrametric or self.contact_bounds or self.structure)

    def issues(self) -> list[str]:
        return self.structure + self.bezout + self.ultrametric + self.contact_bounds

    def __bool__(self):
        return self.ok


class UnknownComponent(KeyError):
    pass


@dataclass
class Arrangement:
    components: list[Component]
    points: list[SingularPoint]

    def __post_init__(self):
        self._deg = {c.id: c.degree for c in self.components}

    def degree(self, cid: str) -> int:
        return self._deg[cid]

    @property
    def total_degree(self) -> int:
        return sum(c.degree for c in self.components)

    def point(self, pid: str) -> SingularPoint:
        for p in self.points:
            if p.id == pid:
                return p
        raise KeyError(pid)

    @classmethod
    def from_dict(cls, d: dict) -> "Arrangement":
        comps = [Component(c["id"], int(c["degree"])) for c in d["components"]]
        pts = [SingularPoint(p["id"], tuple(p["branches"]), dict(p.get("contact", {}))) for p in d["points"]]
        return cls(comps, pts)

    def to_dict(self) -> dict:
        out = {"components": [{"id": c.id, "degree": c.degree} for c in self.components], "points": []}
        for p in self.points:
            entry = {"id": p.id, "branches": list(p.branches)}
            contact = {k: v for k, v in sorted(p.contact.items()) if v != 1}
            if contact:
                entry["contact"] = contact
            out["points"].append(entry)
        return out

    @classmethod
    def load(cls, path) -> "Arrangement":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def validate(arr: Arrangement) -> ValidationReport:
    rep = ValidationReport()
    ids = [c.id for c in arr.components]
    if len(set(ids)) != len(ids):
        rep.structure.append("duplicate component ids")
    pids = [p.id for p in arr.points]
    if len(set(pids)) != len(pids):
        rep.structure.append("duplicate point ids")
    known = set(ids)
    for p in arr.points:
        for b in p.branches:
            if b not in known:
                raise UnknownComponent(f"point {p.id} references unknown component {b}")
        if len(p.branches) < 2:
            rep.structure.append(f"point {p.id}: fewer than two branches")
        if len(set(p.branches)) != len(p.branches):
            rep.structure.append(f"point {p.id}: repeated branch")
        for k, v in p.contact.items():
            a, b = k.split("|")
            if a not in p.branches or b not in p.branches:
                rep.structure.append(f"point {p.id}: contact {k} names a branch not at the point")
            if v < 1:
                rep.structure.append(f"point {p.id}: contact {k} must be positive")
        for a, b, c in itertools.permutations(p.branches, 3):
            if p.order(a, c) < min(p.order(a, b), p.order(b, c)):
                msg = f"point {p.id}: contact({a},{c}) < min(contact({a},{b}), contact({b},{c}))"
                if msg not in rep.ultrametric:
                    rep.ultrametric.append(msg)
        for a, b in p.pairs():
            da, db = arr.degree(a), arr.degree(b)
            bound = {2: 1, 3: 2, 4: 4}[da + db]
            if p.order(a, b) > bound:
                rep.contact_bounds.append(
                    f"point {p.id}: contact({a},{b}) = {p.order(a, b)} exceeds {bound}"
                )
    for a, b in itertools.combinations(ids, 2):
        total = sum(p.order(a, b) for p in arr.points if a in p.branches and b in p.branches)
        need = arr.degree(a) * arr.degree(b)
        if total != need:
            rep.bezout.append(f"{pair_key(a, b)}: intersection sum {total}, expected {need}")
    return rep


def delta_invariant(p: SingularPoint) -> int:
    """Sum of pairwise contact orders over the branches at p."""
    return sum(p.order(a, b) for a, b in p.pairs())


def delta_check_rational_curve(arr: Arrangement, degree: int) -> bool:
    """Genus check for a singular rational curve of the given degree modelled branch by branch.

    Each point of ``arr`` is a double point of the curve, its two entries in ``branches``
    being local branches. Returns True iff the delta invariants add up to (d-1)(d-2)/2.
    """
    for p in arr.points:
        if len(p.branches) > 2:
            raise ValueError(f"point {p.id} has multiplicity {len(p.branches)} > 2")
    return sum(delta_invariant(p) for p in arr.points) == (degree - 1) * (degree - 2) // 2
