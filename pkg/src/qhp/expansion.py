"""Weighted expansions at nodes of a boundary divisor.

An expansion of weight u/w at a node of U and W is realised by honest blowups: the
first blows up the node, each later one blows up a point of the newest exceptional curve
on its U-side or W-side. Multiplicities in the pullbacks of U and W add up like
Stern-Brocot mediants, so the side is chosen by comparing the newest ratio with u/w. The
last curve A has multiplicities (u, w); it is left out of the boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .graph import DualGraph, Edge, Vertex, _solve
from .lattice import DivisorClass, NSLattice, blowup_extend, pair


def parse_weight(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    s = str(s).strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"weights must be exact rationals, got {s!r}")
    return Fraction(s)


@dataclass(frozen=True)
class ExpansionCenter:
    U: str
    W: str
    weight: Fraction
    node: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight", parse_weight(self.weight))
        if self.weight <= 0:
            raise ValueError(f"weight must be positive, got {self.weight}")
        if self.U == self.W:
            raise ValueError("U and W must be different components")

    @property
    def u(self) -> int:
        return self.weight.numerator

    @property
    def w(self) -> int:
        return self.weight.denominator

    def swapped(self) -> "ExpansionCenter":
        return ExpansionCenter(self.W, self.U, 1 / self.weight, self.node)


@dataclass(frozen=True)
class ExpansionRecord:
    center: ExpansionCenter
    inserted_chain: tuple[str, ...]  # from the U side to the W side, bubble included
    bubble: str
    multiplicities: dict = field(hash=False)  # vertex -> (mult in U pullback, mult in W pullback)
    steps: tuple = ()  # (new curve, curve on its U side, curve on its W side), in blowup order
    edge: Edge | None = None  # the node that was blown up

    @property
    def blowups(self) -> int:
        return len(self.steps)

    def side_chains(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """(W', U'): the pieces of the chain between U and A, and between A and W."""
        i = self.inserted_chain.index(self.bubble)
        return self.inserted_chain[:i], self.inserted_chain[i + 1:]


class ExpansionError(ValueError):
    pass


def _fresh_label(g: DualGraph, classes: dict) -> str:
    i = 1
    while f"A{i}" in classes or f"A{i}" in g or f"A{i}.1" in g:
        i += 1
    return f"A{i}"


def expand(g: DualGraph, lat: NSLattice, classes: dict, center: ExpansionCenter, label: str | None = None):
    """Expand at ``center``; returns (graph, lattice, classes, record).

    ``classes`` may include curves outside the boundary (earlier bubbles); they are carried
    along unchanged. With ``lat`` and ``classes`` both None only the graph is tracked.
    """
    track = classes is not None
    if not track:
        lat, classes = NSLattice(1), {}
    U, W = center.U, center.W
    if U not in g or W not in g:
        raise ExpansionError(f"unknown component in center {U},{W}")
    try:
        edge = g.edge_at(U, W, center.node)
    except KeyError as exc:
        raise ExpansionError(str(exc.args[0])) from None
    label = label or _fresh_label(g, classes)
    u, w = center.u, center.w
    seq = [U, W]
    mult = {U: (1, 0), W: (0, 1)}
    j = 0  # the point to blow up is seq[j] ∩ seq[j+1]
    cls = {k: v.extended() for k, v in classes.items()}
    lat = blowup_extend(lat)
    weights = {U: g.w(U), W: g.w(W)}
    steps, created = [], []
    while True:
        if len(created):
            lat = blowup_extend(lat)
            cls = {k: v.extended() for k, v in cls.items()}
        x, y = seq[j], seq[j + 1]
        e = f"{label}#{len(created) + 1}"
        k = lat.rank - 1
        ek = lat.exceptional(k)
        if track:
            cls[x] = cls[x] - ek
            cls[y] = cls[y] - ek
            cls[e] = ek
        weights[x] -= 1
        weights[y] -= 1
        weights[e] = -1
        a, b = mult[x][0] + mult[y][0], mult[x][1] + mult[y][1]
        mult[e] = (a, b)
        seq.insert(j + 1, e)
        steps.append((e, x, y))
        created.append(e)
        if (a, b) == (u, w):
            break
        if u * b > a * w:
            pass  # next point is x ∩ e, i.e. seq[j] ∩ seq[j+1]
        else:
            j += 1  # e ∩ y
    rename = {e: (label if i == len(created) - 1 else f"{label}.{i + 1}") for i, e in enumerate(created)}
    rn = lambda v: rename.get(v, v)
    bubble = label
    chain = tuple(rn(v) for v in seq[1:-1])
    new_classes = {rn(k): v for k, v in cls.items()}
    verts = [Vertex(v.id, weights.get(v.id, v.w), v.tags) for v in g.vertices]
    verts += [
        Vertex(rn(e), weights[e], frozenset({"exceptional", "expansion"}))
        for e in created if rn(e) != bubble
    ]
    edges = list(g.edges)
    edges.remove(edge)
    full = [rn(v) for v in seq]
    for p, q in zip(full, full[1:]):
        if bubble not in (p, q):
            edges.append(Edge(p, q))
    out = DualGraph(verts, edges)
    rec = ExpansionRecord(
        center=center,
        inserted_chain=chain,
        bubble=bubble,
        multiplicities={rn(e): mult[e] for e in created},
        steps=tuple((rn(e), rn(x), rn(y)) for e, x, y in steps),
        edge=edge,
    )
    if not track:
        return out, None, None, rec
    return out, lat, new_classes, rec


def expand_many(g: DualGraph, lat: NSLattice, classes: dict, centers):
    records = []
    for c in centers:
        if c.U in g and c.W in g and not g.edges_between(c.U, c.W) and records:
            raise ExpansionError(f"center {c.U},{c.W} names a node consumed by an earlier expansion")
        if c.node is not None and records and any(r.edge.node == c.node and {r.center.U, r.center.W} == {c.U, c.W} for r in records):
            raise ExpansionError(f"node {c.node} was consumed by an earlier expansion")
        g, lat, classes, rec = expand(g, lat, classes, c)
        records.append(rec)
    return g, lat, classes, records


def contract_expansion(g: DualGraph, record: ExpansionRecord) -> DualGraph:
    """Undo one expansion: put the bubble back and blow down in reverse order."""
    weights = {v.id: v.w for v in g.vertices}
    edges = list(g.edges)
    present = set(g.ids)
    for e in record.inserted_chain:
        if e != record.bubble and e not in present:
            raise ExpansionError(f"record does not match graph: {e} missing")
    weights[record.bubble] = -1
    for i, (e, x, y) in reversed(list(enumerate(record.steps))):
        if e != record.bubble:
            inc = [ed for ed in edges if e in (ed.a, ed.b)]
            if weights[e] != -1 or sorted(ed.other(e) for ed in inc) != sorted((x, y)):
                raise ExpansionError(f"record does not match graph at {e}")
            for ed in inc:
                edges.remove(ed)
            present.discard(e)
        if x not in weights or y not in weights:
            raise ExpansionError("record does not match graph")
        weights[x] += 1
        weights[y] += 1
        del weights[e]
        edges.append(record.edge if i == 0 else Edge(x, y))
    verts = [Vertex(v.id, weights[v.id], v.tags) for v in g.vertices if v.id in weights]
    return DualGraph(verts, edges)


def _pullback_multiplicities(chain: list[str], chain_w: dict, C: str) -> list[Fraction]:
    # solve (intersection matrix of the chain) m = -(C . chain)
    n = len(chain)
    M = [[Fraction(0)] * n for _ in range(n)]
    for i, v in enumerate(chain):
        M[i][i] = Fraction(chain_w[v])
    for i in range(n - 1):
        M[i][i + 1] = M[i + 1][i] = Fraction(1)
    rhs = [Fraction(-1 if (i == 0 and C == "U") or (i == n - 1 and C == "W") else 0) for i in range(n)]
    return _solve(M, rhs)


def is_expansion(original: DualGraph, result: DualGraph, records) -> bool:
    """Check the defining properties of an expansion for each record, and the round trip."""
    g = result
    for rec in reversed(list(records)):
        chain = list(rec.inserted_chain)
        if rec.bubble not in chain or rec.bubble in g:
            return False
        inner = [v for v in chain if v != rec.bubble]
        if any(v not in g for v in inner):
            return False
        chain_w = {v: g.w(v) for v in inner}
        chain_w[rec.bubble] = -1
        if sum(1 for v in chain if chain_w[v] == -1) != 1:
            return False
        U, W = rec.center.U, rec.center.W
        path = [U] + chain + [W]
        for p, q in zip(path, path[1:]):
            if rec.bubble in (p, q):
                continue
            if g.multiplicity(p, q) != 1:
                return False
        for k, v in enumerate(path[1:-1], start=1):
            if v != rec.bubble:
                expected = sum(1 for q in (path[k - 1], path[k + 1]) if q != rec.bubble)
                if g.beta(v) != expected:
                    return False
        mu = _pullback_multiplicities(chain, chain_w, "U")
        mw = _pullback_multiplicities(chain, chain_w, "W")
        i = chain.index(rec.bubble)
        if (mu[i], mw[i]) != (rec.center.u, rec.center.w) or gcd(rec.center.u, rec.center.w) != 1:
            return False
        try:
            g = contract_expansion(g, rec)
        except ExpansionError:
            return False
    return g == original


def find_bubbles(g: DualGraph, lat: NSLattice, classes: dict, tracked) -> list[str]:
    """Tracked curves off the boundary that are (-1)-curves meeting it twice on distinct components."""
    out = []
    for t in tracked:
        if t in g or t not in classes:
            continue
        ct = classes[t]
        if pair(lat, ct, ct) != -1:
            continue
        meets = {v: pair(lat, ct, classes[v]) for v in g.ids}
        hit = {v: m for v, m in meets.items() if m}
        if sum(hit.values()) == 2 and len(hit) == 2 and all(m == 1 for m in hit.values()):
            out.append(t)
    return out
