"""The Q-homology plane criterion for expansions, and orders of H_1.

For a boundary D' with component classes r_{D'} and expansions at nodes (U_i, W_i) with
weights u_i/w_i, the relations R_j spanning ker r_{D'} give the square matrix
m_ij = u_i c_j(U_i) + w_i c_j(W_i). The complement is a Q-homology plane iff r_{D'} is
onto over Q, D' minus the centers is a tree, and m is square with det m != 0; then
#H_1 = |det m| * #coker r_{D'}, which must agree with |d(D)|^(1/2).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .expansion import ExpansionCenter, expand_many
from .graph import DualGraph, discriminant, is_rational_tree
from .lattice import INFINITE, IntMatrix, NSLattice, cokernel_order, det, kernel_basis, rank
from .poly import Poly


@dataclass
class Kernel:
    """Integer relations among boundary components: each vector is indexed like ``ids``."""

    ids: tuple[str, ...]
    vectors: tuple[tuple[int, ...], ...]

    def coefficient(self, j: int, comp: str) -> int:
        return self.vectors[j][self.ids.index(comp)]

    def __len__(self):
        return len(self.vectors)

    def relation(self, j: int) -> dict[str, int]:
        return {c: x for c, x in zip(self.ids, self.vectors[j]) if x}

    def transformed(self, T) -> "Kernel":
        """Change of basis R'_j = sum_k T[j][k] R_k."""
        n = len(self.ids)
        vecs = [tuple(sum(T[j][k] * self.vectors[k][i] for k in range(len(self.vectors))) for i in range(n))
                for j in range(len(T))]
        return Kernel(self.ids, tuple(vecs))


@dataclass
class QhpVerdict:
    is_qhp: bool
    reasons: list = field(default_factory=list)
    h1_order: int | None = None
    detm: int | None = None
    coker: int | float | None = None
    d_of_D: int | None = None
    n: int = 0

    def to_dict(self) -> dict:
        return {
            "is_qhp": self.is_qhp,
            "reasons": list(self.reasons),
            "detm": self.detm,
            "coker": None if self.coker is INFINITE or self.coker == INFINITE else self.coker,
            "h1": self.h1_order,
            "d_of_D": self.d_of_D,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class SquareIdentityError(AssertionError):
    pass


def restriction_matrix(g: DualGraph, classes: dict, lat: NSLattice | None = None) -> IntMatrix:
    missing = [v for v in g.ids if v not in classes]
    if missing:
        raise KeyError(f"no class for {missing}")
    if lat is None:
        lengths = {len(classes[v]) for v in g.ids}
        if len(lengths) > 1:
            raise ValueError("classes live in different lattices")
        nrows = lengths.pop() if lengths else 1
    else:
        nrows = lat.rank
    return IntMatrix.from_columns([classes[v].coords for v in g.ids], nrows)


def relations(g: DualGraph, classes: dict, lat: NSLattice | None = None) -> Kernel:
    return Kernel(tuple(g.ids), tuple(kernel_basis(restriction_matrix(g, classes, lat))))


def qhp_check_direct(g: DualGraph, lat: NSLattice, classes: dict) -> QhpVerdict:
    """Criterion for X minus D without expansions: rational tree, #D = rank, r_D onto over Q."""
    reasons = []
    r = restriction_matrix(g, classes, lat)
    if not is_rational_tree(g):
        reasons.append("D is not a tree")
    if len(g) != lat.rank:
        reasons.append(f"#D = {len(g)} differs from rank {lat.rank}")
    if r.rank() != lat.rank:
        reasons.append("r_D is not onto over Q")
    coker = cokernel_order(r)
    d = discriminant(g)
    v = QhpVerdict(False, reasons, None, 1, coker, d, 0)
    if reasons:
        return v
    v.is_qhp = True
    v.h1_order = coker
    if abs(d) != coker ** 2:
        raise SquareIdentityError(f"|d(D)| = {abs(d)} but #coker = {coker}")
    return v


def m_matrix(kernel: Kernel, centers) -> IntMatrix:
    """Rows indexed by centers, columns by relations; centers carry weights."""
    return IntMatrix.from_rows(
        [
            [c.u * kernel.coefficient(j, c.U) + c.w * kernel.coefficient(j, c.W) for j in range(len(kernel))]
            for c in centers
        ],
        len(kernel),
    )


def _centers(items):
    return [r.center if hasattr(r, "center") else r for r in items]


def qhp_check_expansion(g: DualGraph, lat: NSLattice, classes: dict, records) -> QhpVerdict:
    """Criterion for the expansion of (g, classes) with the given records (or centers).

    The expanded boundary is rebuilt to compare |d(D)| with the square of the H_1 order.
    """
    return Prepared(g, lat, classes).check(_centers(records))[0]


class Prepared:
    """Boundary D' with its restriction data computed once, for checking many weight choices."""

    def __init__(self, g: DualGraph, lat: NSLattice, classes: dict):
        self.graph, self.lattice, self.classes = g, lat, classes
        r = restriction_matrix(g, classes, lat)
        self.kernel = Kernel(tuple(g.ids), tuple(kernel_basis(r)))
        self.onto = r.rank() == lat.rank
        self.coker = cokernel_order(r)

    def check(self, centers, with_discriminant: bool = True) -> tuple[QhpVerdict, DualGraph]:
        g = self.graph
        reasons = []
        if not self.onto:
            reasons.append("(1) components of D' do not span NS over Q")
        try:
            cut = g.remove_edges([g.edge_at(c.U, c.W, c.node) for c in centers])
        except (KeyError, ValueError) as exc:
            raise ValueError(f"bad center: {exc}") from None
        if not is_rational_tree(cut):
            reasons.append("(2) D' minus the centers is not a tree")
        n = len(centers)
        detm = None
        if len(self.kernel) != n:
            reasons.append(f"(3) #D' - rank = {len(self.kernel)} differs from the number of centers {n}")
        else:
            detm = m_matrix(self.kernel, centers).det()
            if detm == 0:
                reasons.append("(3) det m = 0")
        D, _, _, _ = expand_many(g, self.lattice, self.classes, centers)
        d = discriminant(D) if with_discriminant else None
        v = QhpVerdict(not reasons, reasons, None, detm, self.coker, d, n)
        if v.is_qhp:
            v.h1_order = abs(detm) * self.coker
            if d is not None and abs(d) != v.h1_order ** 2:
                raise SquareIdentityError(f"|d(D)| = {abs(d)} but |det m| * #coker = {v.h1_order}")
        return v, D


def weight_variables(i: int) -> tuple[str, str]:
    return f"u{i + 1}", f"w{i + 1}"


def detm_symbolic(kernel: Kernel, centers) -> tuple[Poly, Fraction]:
    """det m as a polynomial in u_1, w_1, ..., u_n, w_n.

    Row i of m is u_i a_i + w_i b_i, so by multilinearity the coefficient of a monomial
    choosing u or w in each row is the determinant with rows a_i or b_i. Returns the
    normalized polynomial and the scalar s with det m = s * polynomial.
    """
    pairs = [(c.U, c.W) if not isinstance(c, tuple) else c for c in _centers(centers)]
    n = len(pairs)
    if len(kernel) != n:
        raise ValueError(f"{len(kernel)} relations but {n} centers")
    a = [[kernel.coefficient(j, U) for j in range(n)] for U, _ in pairs]
    b = [[kernel.coefficient(j, W) for j in range(n)] for _, W in pairs]
    terms = {}
    for choice in itertools.product((0, 1), repeat=n):
        rows = [a[i] if s == 0 else b[i] for i, s in enumerate(choice)]
        c = det(rows)
        if c:
            mono = tuple((weight_variables(i)[s], 1) for i, s in enumerate(choice))
            terms[mono] = c
    p = Poly(terms) if n else Poly.const(1)
    return p.normalized()


def homogenize(p: Poly, names) -> Poly:
    """Substitute names[i] = u_{i+1}/w_{i+1} and clear denominators."""
    for i, v in enumerate(names):
        p = p.substitute_ratio(v, *weight_variables(i))
    return p


def locus_matches(detm: Poly, printed: Poly, names) -> bool:
    """Whether det m and a printed non-vanishing condition have the same zeros at positive weights.

    The printed polynomial is written in one rational weight per center. After
    homogenizing, det m must be the printed polynomial times a factor whose coefficients
    all share a sign.
    """
    P = homogenize(printed, names)
    if P.is_zero():
        return False
    q, r = detm.divmod(P)
    return r.is_zero() and q.sign_definite()


@dataclass
class ZhpSearch:
    pairs: list
    found: bool
    reason: str = ""
    base: tuple | None = None


def linear_form(p: Poly) -> tuple[int, int]:
    """(a, b) for a one-center form a*u1 + b*w1."""
    if p.variables - {"u1", "w1"}:
        raise ValueError("expected a form in u1, w1")
    a = p.terms.get((("u1", 1),), 0)
    b = p.terms.get((("w1", 1),), 0)
    if set(p.terms) - {(("u1", 1),), (("w1", 1),)}:
        raise ValueError("not a linear form")
    return int(a), int(b)


def zhp_weights(form, k: int = 1, count: int = 10, bound: int = 1000) -> ZhpSearch:
    """Coprime positive (u, w) with |a u + b w| = k, built from a solution of value +-1.

    If a solution (u0, w0) of a u0 + b w0 = 1 exists, every u = k u0 - l b,
    w = k w0 + l a with gcd(k, l) = 1 and u, w > 0 is coprime and has value k. Both signs
    of the value are searched, within u0 + w0 <= bound.
    """
    a, b = linear_form(form) if isinstance(form, Poly) else form
    if k < 1:
        raise ValueError("k must be positive")
    if (a >= 0 and b >= 0) or (a <= 0 and b <= 0):
        # |a u + b w| = |a| u + |b| w grows with u and w, so the solutions are finite
        low = abs(a) + abs(b)
        if low > k:
            what = "no ZHP" if k == 1 else f"no weight with value {k}"
            return ZhpSearch([], False, f"|{a}u{b:+d}w| >= {low} for all positive u, w: {what}")
        A, B = abs(a), abs(b)
        sols = [(u, w) for u in range(1, k + 1) for w in range(1, k + 1)
                if A * u + B * w == k and math.gcd(u, w) == 1]
        sols.sort(key=lambda p: (p[0] + p[1], p[0]))
        return ZhpSearch(sols[:count], bool(sols), "" if sols else f"no coprime solution of value {k}")
    g = math.gcd(a, b)
    if g == 0 or k % g:
        return ZhpSearch([], False, f"every value of {a}u{b:+d}w is divisible by {g}, so none equals {k}")
    if g > 1:
        return zhp_weights((a // g, b // g), k // g, count, bound)
    bases = {}
    for h in range(2, bound + 1):
        for u0 in range(1, h):
            w0 = h - u0
            val = a * u0 + b * w0
            if abs(val) == 1 and math.gcd(u0, w0) == 1 and val not in bases:
                bases[val] = (u0, w0)
        if len(bases) == 2:
            break
    if not bases:
        return ZhpSearch([], False, f"no ZHP found with u + w <= {bound}")
    out = set()
    for sign, (u0, w0) in bases.items():
        aa, bb = sign * a, sign * b  # aa*u0 + bb*w0 == 1
        span = count + 2
        while True:
            for l in range(-span, span + 1):
                if math.gcd(k, l) != 1:
                    continue
                u, w = k * u0 - l * bb, k * w0 + l * aa
                if u > 0 and w > 0 and math.gcd(u, w) == 1 and abs(a * u + b * w) == k:
                    out.add((u, w))
            if len([1 for p in out]) >= count or span > 50 * (count + 2):
                break
            span *= 2
    pairs = sorted(out, key=lambda p: (p[0] + p[1], p[0]))[:count]
    return ZhpSearch(pairs, True, "", tuple(sorted(bases.values())))
