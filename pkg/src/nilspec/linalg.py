"""Exact linear algebra over the rationals.

Everything downstream (filtrations, cochain complexes, spectral pages)
reduces to row reduction, spans, sums, intersections, images and preimages
of subspaces of Q^n.  Matrices are dense grids of ``fractions.Fraction``;
a subspace is stored as its canonical reduced row-echelon basis, so two
subspaces are equal as sets iff their basis matrices are identical.

Row reduction runs on integer rows (cross-multiplication plus gcd
normalisation) and divides by the pivot only when converting back to
rationals.  This keeps every computation exact while staying fast on the
sparse small-integer matrices that dominate here.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DimensionMismatchError(ValueError):
    """Operands live in different ambient spaces or have incompatible shapes."""


def rat(value: int | str | Fraction) -> Fraction:
    """Coerce an int, Fraction or string like ``-3/2`` to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip().replace("−", "-"))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


# ---------------------------------------------------------------------------
# integer-row reduction core
# ---------------------------------------------------------------------------

def _row_to_ints(row: Sequence[Fraction]) -> list[int]:
    """Scale a rational row by the lcm of its denominators (span-preserving)."""
    scale = 1
    for x in row:
        d = x.denominator
        if d != 1:
            scale = scale * d // math.gcd(scale, d)
    if scale == 1:
        return [x.numerator for x in row]
    return [x.numerator * (scale // x.denominator) for x in row]


def _int_rref(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Gauss-Jordan on integer rows; returns reduced rows and pivot columns.

    Returned rows are in echelon order with positive pivot entries and zeros
    above and below every pivot; they are not yet scaled to pivot 1.
    """
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        best = -1
        for i in range(r, nrows):
            v = rows[i][c]
            if v:
                if best < 0 or abs(v) < abs(rows[best][c]):
                    best = i
                    if abs(v) == 1:
                        break
        if best < 0:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        if prow[c] < 0:
            prow = rows[r] = [-x for x in prow]
        piv = prow[c]
        support = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            if piv == 1:
                for j in support:
                    row[j] -= f * prow[j]
            else:
                g = math.gcd(f, piv)
                a = piv // g
                b = f // g
                if a != 1:
                    for j in range(ncols):
                        if row[j]:
                            row[j] *= a
                for j in support:
                    row[j] -= b * prow[j]
                g = 0
                for x in row:
                    if x:
                        g = math.gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    rows[i] = [x // g for x in row]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def _rref_rows(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Canonical RREF rows (pivot entries 1) and pivot columns, zero rows dropped."""
    int_rows = [_row_to_ints(row) for row in rows]
    reduced, pivots = _int_rref(int_rows, ncols)
    out = []
    for row, c in zip(reduced, pivots):
        piv = row[c]
        out.append([Fraction(x, piv) for x in row])
    return out, pivots


def _kernel_rows(rows: Iterable[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel {x : M x = 0} of the matrix with the given rows."""
    reduced, pivots = _rref_rows(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * ncols
        vec[free] = _ONE
        for row, c in zip(reduced, pivots):
            if row[free]:
                vec[c] = -row[free]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[Fraction | int]]):
        data = tuple(tuple(rat(x) for x in row) for row in entries)
        if len(data) != rows or any(len(row) != cols for row in data):
            raise DimensionMismatchError(f"entry grid does not have shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.entries = data

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[Fraction | int]], cols: int | None = None) -> Matrix:
        rows = len(entries)
        if cols is None:
            if rows == 0:
                raise DimensionMismatchError("cannot infer column count of an empty matrix")
            cols = len(entries[0])
        return cls(rows, cols, entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols, [[_ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> list[Fraction]:
        return [row[j] for row in self.entries]

    def transpose(self) -> Matrix:
        return Matrix(self.cols, self.rows, zip(*self.entries)) if self.rows and self.cols else Matrix(self.cols, self.rows, [[_ZERO] * self.rows for _ in range(self.cols)])

    def apply(self, vector: Sequence[Fraction]) -> list[Fraction]:
        """Matrix-vector product; skips zero coordinates of the input."""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} against {self.cols} columns")
        out = [_ZERO] * self.rows
        for j, v in enumerate(vector):
            if v:
                for i, row in enumerate(self.entries):
                    e = row[j]
                    if e:
                        out[i] += v * e
        return out

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise DimensionMismatchError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        data = [[sum((row[k] * col[k] for k in range(self.cols) if row[k]), _ZERO) for col in cols]
                for row in self.entries]
        return Matrix(self.rows, other.cols, data)

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Canonical reduced row-echelon form of ``m`` (same shape) and its rank."""
    reduced, pivots = _rref_rows(m.entries, m.cols)
    rank = len(reduced)
    padded = reduced + [[_ZERO] * m.cols for _ in range(m.rows - rank)]
    return Matrix(m.rows, m.cols, padded), rank


def rank(m: Matrix) -> int:
    return rref(m)[1]


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """Linear subspace of Q^n held as a canonical RREF basis, one vector per row.

    Canonicity makes equality-of-sets the same as equality-of-bases, which is
    what the golden-table comparisons rely on.
    """

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, basis: Matrix, _pivots: tuple[int, ...] | None = None):
        if basis.cols != ambient_dim:
            raise DimensionMismatchError("basis width differs from ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis
        if _pivots is None:
            _pivots = tuple(next(j for j, x in enumerate(row) if x) for row in basis.entries)
        self._pivots = _pivots

    @property
    def dim(self) -> int:
        return self.basis.rows

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, Matrix(0, ambient_dim, []), ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, Matrix.identity(ambient_dim), tuple(range(ambient_dim)))

    @classmethod
    def coordinate(cls, positions: Iterable[int], ambient_dim: int) -> Subspace:
        """Span of the unit vectors at the given coordinate positions."""
        pos = sorted(set(positions))
        entries = []
        for p in pos:
            row = [_ZERO] * ambient_dim
            row[p] = _ONE
            entries.append(row)
        return cls(ambient_dim, Matrix(len(pos), ambient_dim, entries), tuple(pos))

    def reduce(self, vector: Sequence[Fraction]) -> list[Fraction]:
        """Residual of ``vector`` after eliminating this basis; zero iff contained."""
        if len(vector) != self.ambient_dim:
            raise DimensionMismatchError("vector length differs from ambient dimension")
        vec = list(vector)
        for row, p in zip(self.basis.entries, self._pivots):
            f = vec[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        vec[j] -= f * row[j]
        return vec

    def contains_vector(self, vector: Sequence[Fraction]) -> bool:
        return not any(self.reduce(vector))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis.entries == other.basis.entries)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis.entries))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def span(vectors: Iterable[Sequence[Fraction | int]], ambient_dim: int) -> Subspace:
    """Canonical subspace spanned by the given coordinate rows."""
    rows = []
    for v in vectors:
        row = [rat(x) for x in v]
        if len(row) != ambient_dim:
            raise DimensionMismatchError("vector length differs from ambient dimension")
        rows.append(row)
    reduced, pivots = _rref_rows(rows, ambient_dim)
    return Subspace(ambient_dim, Matrix(len(reduced), ambient_dim, reduced), tuple(pivots))


def _check_same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    if b.dim == 0:
        return a
    if a.dim == 0:
        return b
    return span(list(a.basis.entries) + list(b.basis.entries), a.ambient_dim)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the Zassenhaus block trick on [[A A], [B 0]]."""
    _check_same_ambient(a, b)
    n = a.ambient_dim
    rows: list[list[Fraction]] = []
    for row in a.basis.entries:
        rows.append(list(row) + list(row))
    for row in b.basis.entries:
        rows.append(list(row) + [_ZERO] * n)
    reduced, _ = _rref_rows(rows, 2 * n)
    inter = [row[n:] for row in reduced if not any(row[:n])]
    return span(inter, n)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subset of a."""
    _check_same_ambient(a, b)
    if b.dim > a.dim:
        return False
    return all(a.contains_vector(row) for row in b.basis.entries)


def image(m: Matrix, domain: Subspace) -> Subspace:
    """Span of ``m`` applied to a basis of ``domain``; lives in Q^(m.rows)."""
    if m.cols != domain.ambient_dim:
        raise DimensionMismatchError(f"matrix with {m.cols} columns applied to ambient {domain.ambient_dim}")
    return span([m.apply(row) for row in domain.basis.entries], m.rows)


def preimage(m: Matrix, target: Subspace, domain: Subspace) -> Subspace:
    """Largest subspace {x in domain : m x in target}, canonical."""
    if m.cols != domain.ambient_dim:
        raise DimensionMismatchError(f"matrix with {m.cols} columns applied to ambient {domain.ambient_dim}")
    if m.rows != target.ambient_dim:
        raise DimensionMismatchError(f"matrix with {m.rows} rows against target ambient {target.ambient_dim}")
    t = domain.dim
    if t == 0:
        return domain
    images = [m.apply(row) for row in domain.basis.entries]
    if target.dim == target.ambient_dim:
        return domain
    # one linear constraint per coordinate outside the target's pivot set
    residuals = [target.reduce(u) for u in images]
    pivot_set = set(target._pivots)
    constraint_rows = []
    for c in range(m.rows):
        if c in pivot_set:
            continue
        row = [residuals[i][c] for i in range(t)]
        if any(row):
            constraint_rows.append(row)
    coeffs = _kernel_rows(constraint_rows, t)
    vectors = []
    for cvec in coeffs:
        vec = [_ZERO] * domain.ambient_dim
        for ci, brow in zip(cvec, domain.basis.entries):
            if ci:
                for j, x in enumerate(brow):
                    if x:
                        vec[j] += ci * x
        vectors.append(vec)
    return span(vectors, domain.ambient_dim)


def kernel(m: Matrix) -> Subspace:
    """Right kernel {x : m x = 0} as a canonical subspace of Q^(m.cols)."""
    return span(_kernel_rows(m.entries, m.cols), m.cols)
