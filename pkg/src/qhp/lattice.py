"""Integer lattices for iterated blowups of the plane, and exact integer linear algebra.

Matrices are plain Python integers throughout, so nothing overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

INFINITE = math.inf


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    entries: tuple[tuple[int, ...], ...]
    ncols: int = field(default=-1)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        ncols = self.ncols
        if ncols < 0:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int = -1) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows), ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        rows = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cls(tuple(tuple(r) for r in rows), len(cols))

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls(tuple((0,) * c for _ in range(r)), c)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return self.ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.entries, self.cols) if self.rows else IntMatrix.zeros(self.cols, 0)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        oc = [other.column(j) for j in range(other.cols)]
        return IntMatrix.from_rows(
            ([sum(a * b for a, b in zip(r, c)) for c in oc] for r in self.entries), other.cols
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def det(self) -> int:
        return det(self.tolist())

    def rank(self) -> int:
        return rank(self.tolist())


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination. The empty matrix has determinant 1."""
    a = [list(r) for r in m]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in r] for r in m]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U*m*V == S, U and V unimodular, S diagonal with d1 | d2 | ...

    Pivots are chosen by smallest absolute value, which keeps entries small and the
    output deterministic.
    """
    nr, nc = m.shape
    s = m.tolist()
    u = IntMatrix.identity(nr).tolist()
    v = IntMatrix.identity(nc).tolist()

    def row_op(i, j, q):  # row_i -= q * row_j
        s[i] = [a - q * b for a, b in zip(s[i], s[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in s:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(nr, nc):
        nonzero = [(abs(s[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if s[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, nr):
                if s[i][t]:
                    row_op(i, t, s[i][t] // s[t][t])
                    if s[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if s[t][j]:
                    col_op(j, t, s[t][j] // s[t][t])
                    if s[t][j]:
                        done = False
            if not done:
                # a remainder survived; move the smallest entry of row/column t to the pivot
                cands = [(abs(s[i][t]), i, t) for i in range(t, nr) if s[i][t]]
                cands += [(abs(s[t][j]), t, j) for j in range(t, nc) if s[t][j]]
                _, pi, pj = min(cands)
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if s[i][j] % s[t][t]),
                None,
            )
            if bad is None:
                break
            # enforce divisibility: add the offending row and keep reducing
            s[t] = [a + b for a, b in zip(s[t], s[bad[0]])]
            u[t] = [a + b for a, b in zip(u[t], u[bad[0]])]
        if s[t][t] < 0:
            s[t] = [-a for a in s[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return IntMatrix.from_rows(u, nr), IntMatrix.from_rows(s, nc), IntMatrix.from_rows(v, nc)


def snf_diagonal(m: IntMatrix) -> list[int]:
    _, s, _ = smith_normal_form(m)
    return [s[i, i] for i in range(min(s.shape))]


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = math.gcd(*v) if any(v) else 1
    v = [x // g for x in v]
    first = next((x for x in v if x), 0)
    return tuple(-x for x in v) if first < 0 else tuple(v)


def kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated integer kernel {x in Z^cols : m x = 0}.

    Each vector is primitive and its first nonzero entry is positive.
    """
    _, s, v = smith_normal_form(m)
    r = sum(1 for i in range(min(s.shape)) if s[i, i])
    basis = [_primitive(v.column(j)) for j in range(r, m.cols)]
    if len(basis) == 1:
        return basis
    return _lll_lite(basis)


def _lll_lite(basis: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    # Cheap size reduction so that printed relations stay readable; preserves the lattice.
    b = [list(x) for x in basis]
    changed = True
    while changed:
        changed = False
        b.sort(key=lambda x: (sum(y * y for y in x), x))
        for i in range(len(b)):
            for j in range(len(b)):
                if i == j:
                    continue
                nj = sum(y * y for y in b[j])
                q = round(Fraction(sum(x * y for x, y in zip(b[i], b[j])), nj))
                if q:
                    cand = [x - q * y for x, y in zip(b[i], b[j])]
                    if sum(y * y for y in cand) < sum(y * y for y in b[i]):
                        b[i] = cand
                        changed = True
    return [_primitive(x) for x in b]


def cokernel_order(m: IntMatrix) -> int | float:
    """Order of Z^rows / im(m): a positive integer, or INFINITE when the row rank is deficient."""
    if m.rows == 0:
        return 1
    d = snf_diagonal(m)
    nonzero = [x for x in d if x]
    if len(nonzero) < m.rows:
        return INFINITE
    return math.prod(nonzero)


@dataclass(frozen=True)
class DivisorClass:
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    def __len__(self):
        return len(self.coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _same(self, other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        _same(self, other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(tuple(k * a for a in self.coords))

    def extended(self, n: int = 1) -> "DivisorClass":
        """The same class viewed in a lattice with n more exceptional classes."""
        return DivisorClass(self.coords + (0,) * n)


def _same(a: DivisorClass, b: DivisorClass):
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")


@dataclass(frozen=True)
class NSLattice:
    """Neron-Severi lattice of the plane blown up N times, basis H, E_1, ..., E_N."""

    rank: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @property
    def basis_labels(self) -> list[str]:
        return ["H"] + [f"E_{i}" for i in range(1, self.rank)]

    @property
    def gram(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[(1 if i == 0 else -1) if i == j else 0 for j in range(self.rank)] for i in range(self.rank)]
        )

    @property
    def canonical_class(self) -> DivisorClass:
        return DivisorClass((-3,) + (1,) * (self.rank - 1))

    def hyperplane(self) -> DivisorClass:
        return self.basis(0)

    def basis(self, i: int) -> DivisorClass:
        return DivisorClass(tuple(int(j == i) for j in range(self.rank)))

    def exceptional(self, i: int) -> DivisorClass:
        """E_i for 1 <= i < rank."""
        if not 1 <= i < self.rank:
            raise IndexError(i)
        return self.basis(i)

    def zero(self) -> DivisorClass:
        return DivisorClass((0,) * self.rank)


def pair(lat: NSLattice, a: DivisorClass, b: DivisorClass) -> int:
    if len(a) != lat.rank or len(b) != lat.rank:
        raise ValueError(f"dimension mismatch: lattice rank {lat.rank}, got {len(a)} and {len(b)}")
    return a.coords[0] * b.coords[0] - sum(x * y for x, y in zip(a.coords[1:], b.coords[1:]))


def blowup_extend(lat: NSLattice) -> NSLattice:
    return NSLattice(lat.rank + 1)
