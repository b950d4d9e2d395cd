"""The 39 towers: arrangement files, deleted curves, expansion centers and weight conditions.

Each row points to an arrangement of lines and conics. Its minimal log resolution with the
last exceptional curve over every deleted point removed is the boundary D'. A row lists
center combinations (one center per kernel relation), each with the printed weight
condition and whether a Z-homology plane occurs.
"""
from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterator

from ..arrangement import Arrangement, SingularPoint
from ..expansion import ExpansionCenter
from ..graph import DualGraph, bounds_report
from ..homology import Kernel, Prepared, QhpVerdict, detm_symbolic, locus_matches
from ..lattice import NSLattice
from ..poly import Constraint
from ..resolution import ResolutionResult, minimal_log_resolution

DATA = Path(__file__).parent / "data"


def data_dir() -> Path:
    return Path(os.environ.get("QHP_CATALOG_DIR") or DATA)


class UnknownRow(KeyError):
    pass


class UnknownCenter(KeyError):
    pass


@dataclass(frozen=True)
class CenterSpec:
    U: str
    W: str
    var: str
    node: str | None = None

    def at(self, weight) -> ExpansionCenter:
        return ExpansionCenter(self.U, self.W, weight, self.node)

    def matches(self, text: str) -> bool:
        """Match "U,W" or "U,W,node" (orientation as stored)."""
        parts = [s.strip() for s in text.split(",")]
        if parts[:2] != [self.U, self.W]:
            return False
        return len(parts) == 2 or parts[2] == self.node

    def __str__(self):
        return f"({self.U},{self.W}{',' + self.node if self.node else ''};{self.var})"


@dataclass(frozen=True)
class CenterCombo:
    centers: tuple[CenterSpec, ...]
    poly: str | None = None
    extra: str | None = None
    z: bool | None = None

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(c.var for c in self.centers)

    def constraints(self) -> list[Constraint]:
        return [Constraint(t) for t in (self.poly, self.extra) if t]

    def admissible(self, weights) -> tuple[bool, list[str]]:
        env = dict(zip(self.variables, (Fraction(w) for w in weights)))
        failed = [str(c) for c in self.constraints() if not c.holds(env)]
        return not failed, failed

    def __str__(self):
        return " ".join(str(c) for c in self.centers)


@dataclass(frozen=True)
class TowerRow:
    index: int
    label: str
    table: int
    arrangement: str
    deleted: tuple[str, ...]
    combos: tuple[CenterCombo, ...]
    xi_choices: tuple = ({},)
    meta: dict = field(default_factory=dict, hash=False, compare=False)

    @property
    def id(self) -> str:
        return f"<{self.index}>"

    @property
    def n_centers(self) -> int:
        return self.meta["n_centers"]

    @property
    def cstst(self) -> bool:
        return self.table == 4

    @property
    def centers(self) -> list[CenterSpec]:
        out = []
        for cb in self.combos:
            for c in cb.centers:
                if c not in out:
                    out.append(c)
        return out

    def load_arrangement(self, xi: int = 0) -> Arrangement:
        if not 0 <= xi < len(self.xi_choices):
            raise ValueError(f"row {self.label}: xi must be in 0..{len(self.xi_choices) - 1}")
        arr = Arrangement.load(data_dir() / self.arrangement)
        swap = self.xi_choices[xi]
        if swap:
            arr = Arrangement(arr.components, [SingularPoint(swap.get(p.id, p.id), p.branches, p.contact)
                                               for p in arr.points])
        return arr

    def find_combo(self, texts) -> CenterCombo:
        """The combo whose centers match the given "U,W[,node]" strings, in order."""
        for cb in self.combos:
            if len(cb.centers) == len(texts) and all(c.matches(t) for c, t in zip(cb.centers, texts)):
                return cb
        raise UnknownCenter(f"row {self.label}: no center combination {' '.join(texts)}")


def _combo(d: dict) -> CenterCombo:
    return CenterCombo(tuple(CenterSpec(*c) for c in d["centers"]), d.get("poly"), d.get("extra"), d.get("z"))


@lru_cache(maxsize=4)
def _load(path: str) -> tuple[TowerRow, ...]:
    rows = []
    for d in json.loads(Path(path).read_text()):
        rows.append(TowerRow(
            index=d["index"], label=d["label"], table=d["table"], arrangement=d["arrangement"],
            deleted=tuple(d["deleted"]), combos=tuple(_combo(c) for c in d["combos"]),
            xi_choices=tuple(d.get("xi_choices") or [{}]),
            meta={k: d.get(k) for k in ("n_count", "h1_fixed", "z_possible", "n_centers", "note")},
        ))
    return tuple(rows)


def list_rows() -> list[TowerRow]:
    return list(_load(str(data_dir() / "rows.json")))


def get_row(key) -> TowerRow:
    """Look a row up by label ("F2_n1-cusp"), index (19, "19") or bracketed index ("<19>")."""
    rows = list_rows()
    s = str(key).strip()
    if s.startswith("<") and s.endswith(">"):
        s = s[1:-1]
    for r in rows:
        if r.label == s:
            return r
    if s.isdigit() and 1 <= int(s) <= len(rows):
        return rows[int(s) - 1]
    raise UnknownRow(f"unknown row {key!r}")


@dataclass
class BuiltRow:
    row: TowerRow
    xi: int
    resolution: ResolutionResult
    graph: DualGraph
    lattice: NSLattice
    classes: dict

    def __post_init__(self):
        self.prepared = Prepared(self.graph, self.lattice, self.classes)

    @property
    def kernel(self) -> Kernel:
        return self.prepared.kernel

    @property
    def coker(self):
        return self.prepared.coker

    @property
    def n(self) -> int:
        return len(self.kernel)

    def centers(self, combo: CenterCombo, weights) -> list[ExpansionCenter]:
        return [c.at(w) for c, w in zip(combo.centers, weights)]

    def check(self, combo: CenterCombo, weights, with_discriminant: bool = True) -> tuple[QhpVerdict, DualGraph]:
        """QHP verdict and expanded boundary for one weight tuple (u/w per center)."""
        return self.prepared.check(self.centers(combo, weights), with_discriminant)


def build_row(row: TowerRow | str | int, xi: int = 0) -> BuiltRow:
    """Resolve the row's arrangement and delete the last exceptional curve over each listed point."""
    if not isinstance(row, TowerRow):
        row = get_row(row)
    arr = row.load_arrangement(xi)
    nodes = [p for p in row.deleted if p in {s.id for s in arr.points} and len(arr.point(p).branches) == 2
             and arr.point(p).order(*arr.point(p).branches) == 1]
    res = minimal_log_resolution(arr, nodes)
    gone = []
    for p in row.deleted:
        if p not in res.exceptional_order:
            raise ValueError(f"row {row.label}: point {p} is not blown up")
        gone.append(res.exceptional_order[p][-1])
    g = res.graph.remove(gone)
    classes = {k: v for k, v in res.classes.items() if k in g}
    if not g.is_connected():
        raise ValueError(f"row {row.label}: D' is disconnected")
    return BuiltRow(row, xi, res, g, res.lattice, classes)


def constraint_locus(built: BuiltRow, combo: CenterCombo) -> tuple:
    """(det m polynomial, printed polynomial or None, whether their positive zero loci agree).

    Without a printed polynomial the locus agrees when det m has no positive zeros by sign.
    """
    detm, _ = detm_symbolic(built.kernel, [(c.U, c.W) for c in combo.centers])
    printed = Constraint(combo.poly).polynomial() if combo.poly else None
    if printed is None:
        return detm, None, detm.sign_definite()
    return detm, printed, locus_matches(detm, printed, combo.variables)


def admissible(row: TowerRow, combo: CenterCombo | int, weights) -> tuple[bool, list[str]]:
    if isinstance(combo, int):
        combo = row.combos[combo]
    return combo.admissible(weights)


def coprime_weights(max_height: int) -> list[Fraction]:
    """Positive u/w with gcd 1 and u + w <= max_height, by height then numerator."""
    out = [(u + w, u, w) for h in range(2, max_height + 1) for u in range(1, h) for w in [h - u]
           if math.gcd(u, w) == 1]
    return [Fraction(u, w) for _, u, w in sorted(out)]


@dataclass
class EnumResult:
    combo: int
    weights: tuple
    graph: DualGraph
    verdict: QhpVerdict
    bounds: object = None


def enumerate(row: TowerRow | str | int, max_height: int, h1: int | None = None, zhp: bool = False,
              bounds: bool = False, combos=None, xi: int = 0, built: BuiltRow | None = None) -> Iterator[EnumResult]:
    """Expand over all admissible weight tuples of height at most ``max_height``.

    Only QHP boundaries are yielded. ``h1``/``zhp`` filter by the order of H_1; with
    ``bounds`` each result carries its bounds report and failing ones are still yielded.
    """
    if max_height < 2:
        return
    if not isinstance(row, TowerRow):
        row = get_row(row)
    b = built or build_row(row, xi)
    ws = coprime_weights(max_height)
    key = lambda f: (f.numerator + f.denominator, f.numerator)
    idx = range(len(row.combos)) if combos is None else combos
    for ci in idx:
        cb = row.combos[ci]
        tuples = sorted(itertools.product(ws, repeat=len(cb.centers)), key=lambda t: tuple(map(key, t)))
        for t in tuples:
            if not cb.admissible(t)[0]:
                continue
            v, D = b.check(cb, t)
            if not v.is_qhp:
                continue
            if zhp and v.h1_order != 1:
                continue
            if h1 is not None and v.h1_order != h1:
                continue
            yield EnumResult(ci, t, D, v, bounds_report(D) if bounds else None)
