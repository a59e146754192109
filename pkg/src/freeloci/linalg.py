"""Exact dense linear algebra over the rationals.

Everything here is immutable and built on :class:`fractions.Fraction`.
Subspaces are stored with a basis in reduced column echelon form, so two
:class:`Subspace` objects compare equal exactly when they are the same set.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]

__all__ = [
    "QMatrix",
    "Subspace",
    "DimensionError",
    "SingularMatrixError",
    "to_fraction",
    "format_rational",
    "rref",
    "kernel",
    "char_poly",
    "kron",
    "span",
    "subspace_sum",
    "intersect",
    "annihilator",
    "is_complementary",
    "extend_to_basis",
    "map_subspace",
    "is_invariant",
    "solve",
    "EchelonBasis",
]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic; use 'p/q' strings")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class QMatrix:
    """Immutable rows x cols matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: Iterable[Iterable], cols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        for r in data:
            if len(r) != cols:
                raise DimensionError("ragged matrix rows")
        self.rows = len(data)
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple, cols: int) -> "QMatrix":
        # trusted constructor: data already tuple-of-tuples of Fraction
        m = cls.__new__(cls)
        m.rows = len(data)
        m.cols = cols
        m._data = data
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        zero = Fraction(0)
        return cls._raw(tuple((zero,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "QMatrix":
        columns = [tuple(to_fraction(x) for x in c) for c in columns]
        if nrows is None:
            if not columns:
                raise DimensionError("row count needed for an empty column list")
            nrows = len(columns[0])
        return cls._raw(tuple(tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def diag(cls, entries: Sequence) -> "QMatrix":
        n = len(entries)
        zero = Fraction(0)
        return cls._raw(
            tuple(tuple(to_fraction(entries[i]) if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def block(cls, blocks: Sequence[Sequence["QMatrix"]]) -> "QMatrix":
        out = []
        cols = None
        for brow in blocks:
            h = brow[0].rows
            for i in range(h):
                row = ()
                for b in brow:
                    if b.rows != h:
                        raise DimensionError("block row heights differ")
                    row += b._data[i]
                out.append(row)
            width = sum(b.cols for b in brow)
            if cols is None:
                cols = width
            elif cols != width:
                raise DimensionError("block column widths differ")
        return cls._raw(tuple(out), cols or 0)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self._data for x in r)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __iter__(self):
        return iter(self._data)

    @property
    def T(self) -> "QMatrix":
        return QMatrix._raw(tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols)), self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._data)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"

    def _check_same(self, other: "QMatrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols)

    def __neg__(self) -> "QMatrix":
        return QMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def scale(self, s) -> "QMatrix":
        s = to_fraction(s)
        return QMatrix._raw(tuple(tuple(a * s for a in r) for r in self._data), self.cols)

    def __mul__(self, s) -> "QMatrix":
        if isinstance(s, QMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns() if other.rows else [()] * other.cols
        zero = Fraction(0)
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in ocols:
                s = zero
                for k, a in nz:
                    b = c[k]
                    if b:
                        s += a * b
                row.append(s)
            out.append(tuple(row))
        return QMatrix._raw(tuple(out), other.cols)

    def apply(self, v: Sequence) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        zero = Fraction(0)
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((r[k] * x for k, x in nz), zero) for r in self._data)

    def trace(self) -> Fraction:
        return sum((self._data[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def submatrix(self, rows: Sequence[int] | range, cols: Sequence[int] | range) -> "QMatrix":
        cols = list(cols)
        return QMatrix._raw(tuple(tuple(self._data[i][j] for j in cols) for i in rows), len(cols))

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise DimensionError("row count mismatch in hstack")
        return QMatrix._raw(tuple(r + s for r, s in zip(self._data, other._data)), self.cols + other.cols)

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.cols:
            raise DimensionError("column count mismatch in vstack")
        return QMatrix._raw(self._data + other._data, self.cols)

    def power(self, k: int) -> "QMatrix":
        out = QMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self._data])

    def rank(self) -> int:
        return rref(self)[2]

    def inverse(self) -> "QMatrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = QMatrix._raw(tuple(r + QMatrix.identity(n)._data[i] for i, r in enumerate(self._data)), 2 * n)
        R, piv, rk = rref(aug)
        if piv[:n] != list(range(n)) or rk < n:
            raise SingularMatrixError("matrix is singular")
        return R.submatrix(range(n), range(n, 2 * n))

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, data) -> "QMatrix":
        return cls(data)


def _bareiss_det(m: list[list[Fraction]]) -> Fraction:
    """Fraction-free determinant: clear denominators row-wise, then Bareiss."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    scale = 1
    rows = []
    for r in m:
        den = lcm(*(x.denominator for x in r)) if r else 1
        scale *= den
        rows.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pk = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - a * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return Fraction(sign * rows[n - 1][n - 1], scale)


def rref(M: QMatrix) -> tuple[QMatrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    rows = [list(r) for r in M._data]
    nr, nc = M.rows, M.cols
    pivots: list[int] = []
    pr = 0
    for c in range(nc):
        if pr == nr:
            break
        sel = next((i for i in range(pr, nr) if rows[i][c] != 0), None)
        if sel is None:
            continue
        rows[pr], rows[sel] = rows[sel], rows[pr]
        inv = 1 / rows[pr][c]
        prow = [x * inv for x in rows[pr]]
        rows[pr] = prow
        nzc = [j for j in range(c, nc) if prow[j]]
        for i in range(nr):
            if i != pr:
                a = rows[i][c]
                if a:
                    ri = rows[i]
                    for j in nzc:
                        ri[j] -= a * prow[j]
        pivots.append(c)
        pr += 1
    return QMatrix._raw(tuple(tuple(r) for r in rows), nc), pivots, len(pivots)


class Subspace:
    """A subspace of Q^n with a canonical (reduced column echelon) basis."""

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vectors = [tuple(to_fraction(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError("vector length does not match ambient dimension")
        self.ambient_dim = ambient_dim
        if vectors:
            R, piv, rk = rref(QMatrix._raw(tuple(vectors), ambient_dim))
            rowsR = R._data[:rk]
        else:
            piv, rowsR = [], ()
        self._pivots = tuple(piv)
        self.basis = QMatrix._raw(tuple(zip(*rowsR)) if rowsR else tuple(() for _ in range(ambient_dim)), len(rowsR))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, QMatrix.identity(n)._data)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[Vector]:
        return self.basis.columns()

    def contains(self, v: Sequence) -> bool:
        v = tuple(to_fraction(x) for x in v)
        coords = [v[p] for p in self._pivots]
        recon = self.basis.apply(coords) if self.dim else tuple(Fraction(0) for _ in v)
        return recon == v

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of v (assumed in the subspace) in the canonical basis."""
        v = tuple(to_fraction(x) for x in v)
        coords = tuple(v[p] for p in self._pivots)
        if self.dim and self.basis.apply(coords) != v:
            raise ValueError("vector does not lie in the subspace")
        return coords

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.vectors())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        vs = ", ".join("(" + ",".join(format_rational(x) for x in v) + ")" for v in self.vectors())
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim}: [{vs}])"

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in v] for v in self.vectors()]


def span(ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
    return Subspace(ambient_dim, vectors)


def kernel(M: QMatrix) -> Subspace:
    """Right null space of M."""
    R, piv, rk = rref(M)
    n = M.cols
    free = [j for j in range(n) if j not in set(piv)]
    vecs = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -R._data[i][f]
        vecs.append(v)
    return Subspace(n, vecs)


def _check_ambient(*subspaces: Subspace):
    dims = {s.ambient_dim for s in subspaces}
    if len(dims) != 1:
        raise DimensionError("subspaces live in different ambient spaces")


def subspace_sum(S: Subspace, T: Subspace) -> Subspace:
    _check_ambient(S, T)
    return Subspace(S.ambient_dim, S.vectors() + T.vectors())


def annihilator(S: Subspace) -> Subspace:
    """{x : v.x = 0 for all v in S}."""
    if S.dim == 0:
        return Subspace.full(S.ambient_dim)
    return kernel(S.basis.T)


def intersect(S: Subspace, T: Subspace) -> Subspace:
    _check_ambient(S, T)
    return annihilator(subspace_sum(annihilator(S), annihilator(T)))


def is_complementary(S: Subspace, T: Subspace) -> bool:
    _check_ambient(S, T)
    if S.dim + T.dim != S.ambient_dim:
        return False
    return subspace_sum(S, T).dim == S.ambient_dim


def extend_to_basis(S: Subspace) -> QMatrix:
    """Square invertible matrix whose first dim(S) columns are S's basis,
    completed with standard basis vectors."""
    n = S.ambient_dim
    cols = S.vectors()
    eb = EchelonBasis(n)
    for v in cols:
        eb.add(v)
    for i in range(n):
        if len(cols) == n:
            break
        e = tuple(Fraction(int(i == k)) for k in range(n))
        if eb.add(e):
            cols.append(e)
    return QMatrix.from_columns(cols, n) if cols else QMatrix.zeros(0, 0)


def map_subspace(M: QMatrix, S: Subspace) -> Subspace:
    if M.cols != S.ambient_dim:
        raise DimensionError("matrix does not act on the subspace's ambient space")
    return Subspace(M.rows, [M.apply(v) for v in S.vectors()])


def is_invariant(S: Subspace, mats: Iterable[QMatrix]) -> bool:
    return all(S.contains(M.apply(v)) for M in mats for v in S.vectors())


def kron(A: QMatrix, B: QMatrix) -> QMatrix:
    out = []
    for ra in A._data:
        for rb in B._data:
            out.append(tuple(a * b for a in ra for b in rb))
    return QMatrix._raw(tuple(out), A.cols * B.cols)


def char_poly(M: QMatrix) -> tuple[Fraction, ...]:
    """Coefficients of det(tI - M), lowest degree first (monic).

    Berkowitz's division-free recursion: no Fraction division occurs."""
    if not M.is_square():
        raise DimensionError("characteristic polynomial of a non-square matrix")
    n = M.rows
    a = M._data
    p = [Fraction(1)]  # highest degree first
    for r in range(n):
        # leading (r+1)x(r+1) block split as [[A_r, C], [R, a_rr]]
        C = [a[i][r] for i in range(r)]
        R = [a[r][j] for j in range(r)]
        col = [Fraction(1), -a[r][r]]
        v = C
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, v)), Fraction(0)))
            v = [sum((a[i][j] * v[j] for j in range(r)), Fraction(0)) for i in range(r)]
        # lower-triangular Toeplitz (r+2) x (r+1) times p
        new = []
        for i in range(r + 2):
            s = Fraction(0)
            for j in range(max(0, i - len(col) + 1), min(i, r) + 1):
                s += col[i - j] * p[j]
            new.append(s)
        p = new
    return tuple(reversed(p))


def solve(A: QMatrix, B: QMatrix) -> QMatrix | None:
    """A particular solution X of A X = B, or None when inconsistent."""
    if A.rows != B.rows:
        raise DimensionError("row count mismatch")
    aug = A.hstack(B)
    R, piv, rk = rref(aug)
    n = A.cols
    if any(p >= n for p in piv):
        return None
    zero = Fraction(0)
    X = [[zero] * B.cols for _ in range(n)]
    for i, p in enumerate(piv):
        for k in range(B.cols):
            X[p][k] = R._data[i][n + k]
    return QMatrix._raw(tuple(tuple(r) for r in X), B.cols)


class EchelonBasis:
    """Incremental span membership (semi-echelon form)."""

    __slots__ = ("dim", "rows", "pivots", "originals")

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        self.originals: list[Vector] = []

    def reduce(self, v: Sequence) -> list[Fraction]:
        w = list(v)
        for r, p in zip(self.rows, self.pivots):
            a = w[p]
            if a:
                for j in range(p, self.dim):
                    if r[j]:
                        w[j] -= a * r[j]
        return w

    def add(self, v: Sequence) -> bool:
        """Add v; return True when it enlarged the span."""
        w = self.reduce(v)
        p = next((j for j, x in enumerate(w) if x), None)
        if p is None:
            return False
        inv = 1 / w[p]
        self.rows.append([x * inv for x in w])
        self.pivots.append(p)
        self.originals.append(tuple(v))
        return True

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def __len__(self) -> int:
        return len(self.rows)
