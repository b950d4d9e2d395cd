"""Weighted dual graphs of SNC divisors and their combinatorics.

A vertex weight ``w`` is the self-intersection of the component. Edges are intersection
points; two components may meet more than once, and an edge can carry a node id so that
an expansion can single out one of those points.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .lattice import det


@dataclass(frozen=True)
class Vertex:
    id: str
    w: int
    tags: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "tags", frozenset(self.tags))


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    node: str | None = None

    def other(self, v: str) -> str:
        return self.b if v == self.a else self.a

    def joins(self, x: str, y: str) -> bool:
        return {self.a, self.b} == {x, y}


class DualGraph:
    """Immutable weighted multigraph; all modifiers return new graphs."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge] = ()):
        self._v = {}
        for v in vertices:
            if v.id in self._v:
                raise ValueError(f"duplicate vertex {v.id}")
            self._v[v.id] = v
        self._e = tuple(edges)
        for e in self._e:
            if e.a == e.b:
                raise ValueError(f"self-loop at {e.a}")
            if e.a not in self._v or e.b not in self._v:
                raise ValueError(f"edge {e} references an unknown vertex")
        self._adj = {v: [] for v in self._v}
        for e in self._e:
            self._adj[e.a].append(e.b)
            self._adj[e.b].append(e.a)

    # basic access
    @property
    def ids(self) -> list[str]:
        return list(self._v)

    @property
    def vertices(self) -> list[Vertex]:
        return list(self._v.values())

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._e

    def __len__(self):
        return len(self._v)

    def __contains__(self, vid) -> bool:
        return vid in self._v

    def vertex(self, vid: str) -> Vertex:
        return self._v[vid]

    def w(self, vid: str) -> int:
        return self._v[vid].w

    def neighbors(self, vid: str) -> list[str]:
        """Neighbours listed once per edge."""
        return list(self._adj[vid])

    def distinct_neighbors(self, vid: str) -> list[str]:
        return sorted(set(self._adj[vid]))

    def beta(self, vid: str) -> int:
        return len(self._adj[vid])

    def multiplicity(self, a: str, b: str) -> int:
        return self._adj[a].count(b)

    def edges_between(self, a: str, b: str) -> list[Edge]:
        return [e for e in self._e if e.joins(a, b)]

    def edge_at(self, a: str, b: str, node: str | None = None) -> Edge:
        es = self.edges_between(a, b)
        if node is not None:
            es = [e for e in es if e.node == node]
        if not es:
            raise KeyError(f"no edge {a}-{b}" + (f" at node {node}" if node else ""))
        if len(es) > 1:
            raise KeyError(f"{a} and {b} meet {len(es)} times; name the node")
        return es[0]

    def with_tagged(self, tag: str) -> list[str]:
        return [v.id for v in self._v.values() if tag in v.tags]

    # modifiers
    def replace(self, vertices=None, edges=None) -> "DualGraph":
        return DualGraph(self.vertices if vertices is None else vertices, self._e if edges is None else edges)

    def with_weights(self, changes: dict) -> "DualGraph":
        vs = [Vertex(v.id, changes.get(v.id, v.w), v.tags) for v in self.vertices]
        return self.replace(vertices=vs)

    def remove(self, ids: Iterable[str]) -> "DualGraph":
        drop = set(ids)
        missing = drop - set(self._v)
        if missing:
            raise KeyError(f"unknown vertices {sorted(missing)}")
        return DualGraph(
            [v for v in self.vertices if v.id not in drop],
            [e for e in self._e if e.a not in drop and e.b not in drop],
        )

    def subgraph(self, ids: Iterable[str]) -> "DualGraph":
        keep = set(ids)
        return self.remove([v for v in self._v if v not in keep])

    def remove_edges(self, edges: Iterable[Edge]) -> "DualGraph":
        es = list(self._e)
        for e in edges:
            es.remove(e)
        return self.replace(edges=es)

    # structure
    def components(self, ids: Iterable[str] | None = None) -> list[list[str]]:
        pool = list(self._v) if ids is None else [v for v in self._v if v in set(ids)]
        allowed = set(pool)
        seen, out = set(), []
        for s in pool:
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self._adj[x]:
                    if y in allowed and y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def intersection_matrix(self, ids: Sequence[str] | None = None) -> list[list[int]]:
        ids = list(self._v) if ids is None else list(ids)
        return [[self.w(a) if a == b else self.multiplicity(a, b) for b in ids] for a in ids]

    # serialization
    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "w": v.w, "tags": sorted(v.tags)} for v in self.vertices],
            "edges": [
                {"a": e.a, "b": e.b, **({"node": e.node} if e.node is not None else {})} for e in self._e
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DualGraph":
        return cls(
            [Vertex(v["id"], int(v["w"]), frozenset(v.get("tags", ()))) for v in d["vertices"]],
            [Edge(e["a"], e["b"], e.get("node")) for e in d["edges"]],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def loads(cls, s: str) -> "DualGraph":
        return cls.from_dict(json.loads(s))

    def to_dot(self, name: str = "D") -> str:
        lines = [f"graph {json.dumps(name)} {{"]
        for v in sorted(self._v):
            lines.append(f"  {json.dumps(v)} [label={json.dumps(f'{v} ({self.w(v)})')}];")
        for e in sorted(self._e, key=lambda e: (min(e.a, e.b), max(e.a, e.b), e.node or "")):
            a, b = sorted((e.a, e.b))
            lab = f" [label={json.dumps(e.node)}]" if e.node else ""
            lines.append(f"  {json.dumps(a)} -- {json.dumps(b)}{lab};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, DualGraph):
            return NotImplemented
        key = lambda g: (
            {v.id: (v.w, v.tags) for v in g.vertices},
            Counter((min(e.a, e.b), max(e.a, e.b), e.node) for e in g.edges),
        )
        return key(self) == key(other)

    def __repr__(self):
        return f"DualGraph({len(self._v)} vertices, {len(self._e)} edges)"


def chain_graph(weights: Sequence[int], prefix: str = "v") -> DualGraph:
    """Chain with the given self-intersections, vertices v0, v1, ..."""
    vs = [Vertex(f"{prefix}{i}", w) for i, w in enumerate(weights)]
    return DualGraph(vs, [Edge(vs[i].id, vs[i + 1].id) for i in range(len(vs) - 1)])


def is_rational_tree(g: DualGraph) -> bool:
    return len(g) > 0 and g.is_connected() and len(g.edges) == len(g) - 1


def branching_number(g: DualGraph, S: Iterable[str]) -> int:
    S = set(S)
    if not S:
        raise ValueError("empty subset")
    for s in S:
        if s not in g:
            raise KeyError(s)
    return sum(1 for e in g.edges if (e.a in S) != (e.b in S))


@dataclass(frozen=True)
class Twig:
    chain: tuple[str, ...]
    admissible: bool
    minus_two: bool

    def __len__(self):
        return len(self.chain)


def _is_chain(g: DualGraph) -> bool:
    return g.is_connected() and len(g.edges) == len(g) - 1 and all(g.beta(v) <= 2 for v in g.ids)


def _twig(g: DualGraph, chain: list[str]) -> Twig:
    ws = [g.w(v) for v in chain]
    return Twig(tuple(chain), all(w <= -2 for w in ws), all(w == -2 for w in ws))


def maximal_twigs(g: DualGraph) -> list[Twig]:
    """Maximal twigs, each listed from its tip.

    For a graph that is itself a chain the whole chain is one twig, read from the
    lexicographically least tip.
    """
    if len(g) == 0:
        return []
    if not g.is_connected():
        raise ValueError("graph must be connected")
    if _is_chain(g):
        tips = sorted(v for v in g.ids if g.beta(v) <= 1)
        chain, prev = [tips[0]], None
        while True:
            nxt = [u for u in g.neighbors(chain[-1]) if u != prev]
            if not nxt:
                break
            prev = chain[-1]
            chain.append(nxt[0])
        return [_twig(g, chain)]
    out = []
    for t in sorted(v for v in g.ids if g.beta(v) == 1):
        chain = [t]
        while True:
            nxt = [u for u in g.neighbors(chain[-1]) if u not in chain]
            if len(nxt) != 1 or g.beta(nxt[0]) != 2:
                break
            # a beta-2 vertex whose other edge returns into the chain would close a cycle
            chain.append(nxt[0])
        out.append(_twig(g, chain))
    return out


def core(g: DualGraph) -> list[str]:
    inside = {v for t in maximal_twigs(g) for v in t.chain}
    return [v for v in g.ids if v not in inside]


def branching_components(g: DualGraph) -> list[str]:
    return [v for v in g.ids if g.beta(v) >= 3]


@dataclass(frozen=True)
class ENDiagram:
    vertices: tuple[frozenset, ...]
    edges: frozenset

    @property
    def size(self) -> int:
        return len(self.vertices)


def en_diagram(g: DualGraph) -> ENDiagram:
    B = branching_components(g)
    verts = [frozenset([b]) for b in B]
    verts += [frozenset(c) for c in g.components([v for v in g.ids if v not in set(B)])]
    where = {v: i for i, piece in enumerate(verts) for v in piece}
    edges = {tuple(sorted((where[e.a], where[e.b]))) for e in g.edges if where[e.a] != where[e.b]}
    return ENDiagram(tuple(verts), frozenset(edges))


def discriminant(g: DualGraph, S: Iterable[str] | None = None) -> int:
    """det of the negated intersection matrix; the empty divisor has discriminant 1."""
    ids = g.ids if S is None else list(S)
    return det([[-x for x in row] for row in g.intersection_matrix(ids)])


def bark(g: DualGraph, twig: Twig | Sequence[str]) -> dict[str, Fraction]:
    """Bark coefficients of an admissible twig.

    Solves M b = beta - 2 with M the intersection matrix of the twig and beta the
    branching numbers of its components in the whole divisor, so that every
    coefficient lands in (0, 1).
    """
    chain = list(twig.chain if isinstance(twig, Twig) else twig)
    M = g.intersection_matrix(chain)
    n = len(chain)
    for k in range(1, n + 1):
        if det([[-x for x in row[:k]] for row in M[:k]]) <= 0:
            raise ValueError("twig is not negative definite")
    rhs = [Fraction(g.beta(v) - 2) for v in chain]
    return dict(zip(chain, _solve(M, rhs)))


def _solve(M, rhs):
    n = len(M)
    a = [[Fraction(x) for x in row] + [r] for row, r in zip(M, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [a[i][n] / a[i][i] for i in range(n)]


def superfluous_curves(g: DualGraph) -> list[str]:
    out = []
    for v in g.ids:
        if g.w(v) != -1:
            continue
        b = g.beta(v)
        if b == 1 or (b == 2 and len(set(g.neighbors(v))) == 2):
            out.append(v)
    return out


def contract(g: DualGraph, v: str) -> DualGraph:
    """Blow down a (-1)-vertex with beta <= 2 meeting distinct neighbours."""
    if g.w(v) != -1:
        raise ValueError(f"{v} is not a (-1)-curve")
    nbrs = g.neighbors(v)
    if len(nbrs) > 2 or len(set(nbrs)) != len(nbrs):
        raise ValueError(f"contracting {v} would break the SNC property")
    h = g.remove([v]).with_weights({u: g.w(u) + 1 for u in nbrs})
    if len(nbrs) == 2:
        h = h.replace(edges=list(h.edges) + [Edge(nbrs[0], nbrs[1])])
    return h


def snc_minimalize(g: DualGraph, choose: Callable[[list[str]], str] | None = None) -> DualGraph:
    """Contract superfluous (-1)-curves until none is left, lowest id first by default."""
    choose = choose or min
    while True:
        cands = superfluous_curves(g)
        if not cands:
            return g
        g = contract(g, choose(cands))


# automorphisms and isomorphisms

class _Refiner:
    """Colour refinement with a signature table shared between the two graphs being compared."""

    def __init__(self):
        self.table = {}

    def _id(self, sig):
        return self.table.setdefault(sig, len(self.table))

    def refine(self, pairs):
        """pairs: list of (graph, colouring). Refines in lockstep; returns None on mismatch."""
        cols = [dict(c) for _, c in pairs]
        while True:
            sigs = []
            for (g, _), col in zip(pairs, cols):
                sigs.append({
                    v: (col[v], tuple(sorted(Counter(col[u] for u in g.neighbors(v)).items())))
                    for v in g.ids
                })
            new = [{v: self._id(s[v]) for v in s} for s in sigs]
            counts = [Counter(c.values()) for c in new]
            if any(c != counts[0] for c in counts[1:]):
                return None
            if len(counts[0]) == len(Counter(cols[0].values())):
                return new
            cols = new


def _initial(g: DualGraph, ref: _Refiner, use_tags: bool = False):
    return {v: ref._id(("w", g.w(v), tuple(sorted(g.vertex(v).tags)) if use_tags else ())) for v in g.ids}


def _search(g, h, cg, ch, ref, fixed):
    res = ref.refine([(g, cg), (h, ch)])
    if res is None:
        return None
    cg, ch = res
    cells = {}
    for v, c in cg.items():
        cells.setdefault(c, []).append(v)
    open_cells = sorted((len(vs), c) for c, vs in cells.items() if len(vs) > 1)
    if not open_cells:
        inv = {c: v for v, c in ch.items()}
        m = {v: inv[cg[v]] for v in g.ids}
        return m if _is_iso(g, h, m) else None
    c = open_cells[0][1]
    x = min(cells[c])
    for y in sorted(v for v, cc in ch.items() if cc == c):
        tag = ref._id(("ind", fixed + 1, c))
        cg2, ch2 = dict(cg), dict(ch)
        cg2[x], ch2[y] = tag, tag
        m = _search(g, h, cg2, ch2, ref, fixed + 1)
        if m is not None:
            return m
    return None


def _is_iso(g: DualGraph, h: DualGraph, m: dict) -> bool:
    if any(g.w(v) != h.w(m[v]) for v in g.ids):
        return False
    eg = Counter(frozenset((m[e.a], m[e.b])) for e in g.edges)
    eh = Counter(frozenset((e.a, e.b)) for e in h.edges)
    return eg == eh


def find_isomorphism(g: DualGraph, h: DualGraph, use_tags: bool = False) -> dict | None:
    """A weight- and multiplicity-preserving bijection g -> h, or None."""
    if len(g) != len(h) or len(g.edges) != len(h.edges):
        return None
    ref = _Refiner()
    return _search(g, h, _initial(g, ref, use_tags), _initial(h, ref, use_tags), ref, 0)


def is_isomorphic(g: DualGraph, h: DualGraph) -> bool:
    return find_isomorphism(g, h) is not None


@dataclass(frozen=True)
class AutGroup:
    order: int
    generators: tuple[dict, ...]


def graph_automorphisms(g: DualGraph) -> AutGroup:
    """Order and generators of the automorphism group of the weighted graph.

    Uses a base and strong generating set: the order is the product of the orbit sizes
    of successive base points in the pointwise stabilisers, each orbit found by
    individualise-and-refine search.
    """
    ref = _Refiner()
    col = _initial(g, ref)
    order, gens, depth = 1, [], 0
    while True:
        res = ref.refine([(g, col)])
        col = res[0]
        cells = {}
        for v, c in col.items():
            cells.setdefault(c, []).append(v)
        open_cells = sorted((len(vs), c) for c, vs in cells.items() if len(vs) > 1)
        if not open_cells:
            break
        c = open_cells[0][1]
        b = min(cells[c])
        orbit = 1
        for t in sorted(cells[c]):
            if t == b:
                continue
            tag = ref._id(("base", depth, c))
            c1, c2 = dict(col), dict(col)
            c1[b], c2[t] = tag, tag
            m = _search(g, g, c1, c2, ref, depth + 1)
            if m is not None:
                orbit += 1
                gens.append(m)
        order *= orbit
        col = dict(col)
        col[b] = ref._id(("base", depth, c))
        depth += 1
    return AutGroup(order, tuple(gens))


@dataclass
class BoundsReport:
    twigs: int
    core: int
    max_branching: int
    en_vertices: int
    witnesses: dict = field(default_factory=dict)

    LIMITS = {"twigs": 10, "core": 7, "max_branching": 5, "en_vertices": 16}

    def passes(self) -> dict[str, bool]:
        return {k: getattr(self, k) <= lim for k, lim in self.LIMITS.items()}

    @property
    def ok(self) -> bool:
        return all(self.passes().values())


def bounds_report(g: DualGraph) -> BoundsReport:
    tw = maximal_twigs(g)
    co = core(g)
    br = max((g.beta(v) for v in g.ids), default=0)
    en = en_diagram(g)
    rep = BoundsReport(len(tw), len(co), br, en.size)
    ok = rep.passes()
    if not ok["twigs"]:
        rep.witnesses["twigs"] = [t.chain for t in tw]
    if not ok["core"]:
        rep.witnesses["core"] = co
    if not ok["max_branching"]:
        rep.witnesses["max_branching"] = [v for v in g.ids if g.beta(v) > 5]
    if not ok["en_vertices"]:
        rep.witnesses["en_vertices"] = [sorted(p) for p in en.vertices]
    return rep
