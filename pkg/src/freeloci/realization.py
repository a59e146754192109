"""Fornasini-Marchesini realizations r = delta + c^T (I - sum A_j x_j)^-1 (sum b_j x_j).

Also: Higman linearization of polynomials, recovery of a polynomial from a
realization with nilpotent state matrices, similarity of minimal
realizations, and the split of a minimal realization of f^-1 along an
invariant subspace (a minimal factorization).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (
    DimensionError,
    EchelonBasis,
    QMatrix,
    Subspace,
    extend_to_basis,
    format_rational,
    is_complementary,
    is_invariant,
    kernel,
    kron,
    solve,
    to_fraction,
)
from .matalg import is_jointly_nilpotent
from .ncpoly import NCPoly
from .pencil import MatrixTuple, MonicPencil

__all__ = [
    "Realization",
    "RealizationReport",
    "NotRegularError",
    "realize_scalar",
    "realize_variable",
    "realize_sum",
    "realize_product",
    "realize_polynomial",
    "invert_realization",
    "minimize",
    "is_minimal",
    "realize_inverse_of_poly",
    "higman_linearize",
    "realization_to_poly",
    "similarity_between",
    "MinimalSplit",
    "split_at_invariant_subspace",
]


class NotRegularError(ValueError):
    pass


def _vec(v) -> tuple:
    return tuple(to_fraction(x) for x in v)


@dataclass(frozen=True)
class Realization:
    g: int
    d: int
    delta: Fraction
    c: tuple
    A: tuple  # of QMatrix (d x d)
    b: tuple  # of length-d tuples, one per variable

    def __init__(self, delta, c, A, b, g: int | None = None):
        c = _vec(c)
        A = tuple(M if isinstance(M, QMatrix) else QMatrix(M, len(c)) for M in A)
        b = tuple(_vec(v) for v in b)
        d = len(c)
        if g is None:
            g = len(A)
        if len(A) != g or len(b) != g:
            raise DimensionError("need one state matrix and one input vector per variable")
        for M in A:
            if M.shape != (d, d):
                raise DimensionError("state matrices must be d x d")
        for v in b:
            if len(v) != d:
                raise DimensionError("input vectors must have length d")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "delta", to_fraction(delta))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    def pencil(self) -> MonicPencil:
        return MonicPencil(MatrixTuple(self.A))

    def evaluate(self, X: Sequence[QMatrix]) -> QMatrix:
        X = list(X)
        if len(X) != self.g:
            raise DimensionError(f"expected {self.g} matrices")
        n = X[0].rows
        out = QMatrix.identity(n).scale(self.delta)
        if self.d == 0:
            return out
        d = self.d
        L = QMatrix.identity(d * n)
        Bv = QMatrix.zeros(d * n, n)
        for M, bj, Xj in zip(self.A, self.b, X):
            L = L - kron(M, Xj)
            Bv = Bv + kron(QMatrix([[x] for x in bj], 1), Xj)
        C = kron(QMatrix([self.c], d), QMatrix.identity(n))
        return out + C @ L.inverse() @ Bv

    def conjugate(self, T: QMatrix) -> "Realization":
        """Apply the state-space change x -> T x."""
        Ti = T.inverse()
        return Realization(
            self.delta,
            Ti.T.apply(self.c),
            [T @ M @ Ti for M in self.A],
            [T.apply(v) for v in self.b],
            self.g,
        )

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "d": self.d,
            "delta": format_rational(self.delta),
            "c": [format_rational(x) for x in self.c],
            "A": [M.to_json() for M in self.A],
            "b": [[format_rational(x) for x in v] for v in self.b],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Realization":
        g = data["g"]
        d = data["d"]
        A = [QMatrix(M, d) for M in data["A"]]
        R = cls(data["delta"], data["c"], A, data["b"], g)
        if R.d != d:
            raise DimensionError("declared d does not match data")
        return R


@dataclass(frozen=True)
class RealizationReport:
    controllable_dim: int
    observable_dim: int
    d: int

    @property
    def minimal(self) -> bool:
        return self.controllable_dim == self.observable_dim == self.d

    def to_json(self) -> dict:
        return {
            "controllable_dim": self.controllable_dim,
            "observable_dim": self.observable_dim,
            "d": self.d,
            "minimal": self.minimal,
        }


def _zero_mats(g: int, d: int):
    return [QMatrix.zeros(d, d) for _ in range(g)]


def realize_scalar(alpha, g: int) -> Realization:
    return Realization(alpha, (), _zero_mats(g, 0), [()] * g, g)


def realize_variable(j: int, g: int) -> Realization:
    if not 1 <= j <= g:
        raise DimensionError(f"variable x{j} outside 1..{g}")
    b = [(int(i == j - 1),) for i in range(g)]
    return Realization(0, (1,), _zero_mats(g, 1), b, g)


def _check_g(R1: Realization, R2: Realization):
    if R1.g != R2.g:
        raise DimensionError("variable count mismatch")


def realize_sum(R1: Realization, R2: Realization) -> Realization:
    _check_g(R1, R2)
    d1, d2 = R1.d, R2.d
    A = [
        QMatrix.block([[M1, QMatrix.zeros(d1, d2)], [QMatrix.zeros(d2, d1), M2]])
        for M1, M2 in zip(R1.A, R2.A)
    ]
    return Realization(R1.delta + R2.delta, R1.c + R2.c, A, [u + v for u, v in zip(R1.b, R2.b)], R1.g)


def realize_product(R1: Realization, R2: Realization) -> Realization:
    """Realization of r1 * r2 in block upper triangular form."""
    _check_g(R1, R2)
    d1, d2 = R1.d, R2.d
    c2row = QMatrix([R2.c], d2)
    A = []
    for M1, M2, b1 in zip(R1.A, R2.A, R1.b):
        coupling = QMatrix([[x] for x in b1], 1) @ c2row if d1 else QMatrix.zeros(0, d2)
        A.append(QMatrix.block([[M1, coupling], [QMatrix.zeros(d2, d1), M2]]) if d1 and d2 else (M1 if d1 else M2))
    c = R1.c + tuple(R1.delta * x for x in R2.c)
    b = [tuple(R2.delta * x for x in b1) + b2 for b1, b2 in zip(R1.b, R2.b)]
    return Realization(R1.delta * R2.delta, c, A, b, R1.g)


def invert_realization(R: Realization) -> Realization:
    if R.delta == 0:
        raise NotRegularError("cannot invert a realization with delta = 0")
    di = 1 / R.delta
    crow = QMatrix([R.c], R.d)
    A = [M - QMatrix([[x * di] for x in bj], 1) @ crow if R.d else M for M, bj in zip(R.A, R.b)]
    return Realization(di, [-di * x for x in R.c], A, [[di * x for x in bj] for bj in R.b], R.g)


def _controllability(A: Sequence[QMatrix], b: Sequence[tuple], d: int):
    """BFS over words (graded, letters ascending): basis vectors w(A) b_j and their (word, j) labels."""
    eb = EchelonBasis(d)
    vecs, labels = [], []
    for j, v in enumerate(b):
        if eb.add(v):
            vecs.append(v)
            labels.append(((), j))
    i = 0
    while i < len(vecs) and len(vecs) < d:
        v, (w, j) = vecs[i], labels[i]
        for a, M in enumerate(A):
            u = M.apply(v)
            if eb.add(u):
                vecs.append(u)
                labels.append(((a,) + w, j))
        i += 1
    return vecs, labels


def _observability(A: Sequence[QMatrix], c: tuple, d: int):
    eb = EchelonBasis(d)
    vecs = []
    if eb.add(c):
        vecs.append(c)
    i = 0
    AT = [M.T for M in A]
    while i < len(vecs) and len(vecs) < d:
        v = vecs[i]
        for M in AT:
            u = M.apply(v)
            if eb.add(u):
                vecs.append(u)
        i += 1
    return vecs


def is_minimal(R: Realization) -> RealizationReport:
    if R.d == 0:
        return RealizationReport(0, 0, 0)
    return RealizationReport(
        len(_controllability(R.A, R.b, R.d)[0]),
        len(_observability(R.A, R.c, R.d)),
        R.d,
    )


def _restrict_controllable(R: Realization) -> Realization:
    vecs, _ = _controllability(R.A, R.b, R.d)
    k = len(vecs)
    if k == R.d:
        return R
    if k == 0:
        return realize_scalar(R.delta, R.g)
    K = QMatrix.from_columns(vecs, R.d)
    A = [solve(K, M @ K) for M in R.A]
    b = [solve(K, QMatrix([[x] for x in bj], 1)).col(0) for bj in R.b]
    return Realization(R.delta, K.T.apply(R.c), A, b, R.g)


def _restrict_observable(R: Realization) -> Realization:
    vecs = _observability(R.A, R.c, R.d)
    m = len(vecs)
    if m == 0:
        return realize_scalar(R.delta, R.g)
    O = QMatrix.from_columns(vecs, R.d)
    A = [solve(O, M.T @ O).T for M in R.A]
    b = [O.T.apply(bj) for bj in R.b]
    c = solve(O, QMatrix([[x] for x in R.c], 1)).col(0)
    return Realization(R.delta, c, A, b, R.g)


def minimize(R: Realization) -> Realization:
    """Restrict to the controllability space, then pass to the observable quotient."""
    if R.d == 0:
        return R
    R1 = _restrict_controllable(R)
    if R1.d == 0:
        return R1
    return _restrict_observable(R1)


def _require_regular(f: NCPoly) -> None:
    if f.constant_term() != 1:
        hint = ""
        if f.constant_term() == 0:
            hint = " (f(0)=0: translate the variables by a scalar point where f is nonzero first)"
        raise NotRegularError(f"expected constant term 1, got {format_rational(f.constant_term())}{hint}")


def realize_polynomial(f: NCPoly, method: str = "trie") -> Realization:
    """A (not necessarily minimal) realization of the polynomial f.

    "terms" composes scalar/variable realizations with sums and products
    (size = sum of term degrees); "trie" uses one state per nonempty suffix
    of a support word and is controllable by construction."""
    g = f.g
    if method == "terms":
        R = realize_scalar(f.constant_term(), g)
        for w, a in f.items():
            if not w:
                continue
            T = realize_variable(w[0], g)
            for j in w[1:]:
                T = realize_product(T, realize_variable(j, g))
            T = Realization(0, [a * x for x in T.c], T.A, T.b, g)
            R = realize_sum(R, T)
        return R
    if method == "trie":
        states: dict = {}
        for w, _ in f.items():
            for i in range(len(w)):
                s = w[i:]
                if s not in states:
                    states[s] = None
        order = sorted(states, key=lambda s: (len(s), s))
        index = {s: i for i, s in enumerate(order)}
        d = len(order)
        c = [f.coefficient(s) for s in order]
        A = []
        for i in range(1, g + 1):
            rows = [[0] * d for _ in range(d)]
            for s, k in index.items():
                t = (i,) + s
                if t in index:
                    rows[index[t]][k] = 1
            A.append(QMatrix(rows, d))
        b = [[int(s == (j,)) for s in order] for j in range(1, g + 1)]
        return Realization(f.constant_term(), c, A, b, g)
    raise ValueError(f"unknown method {method!r}")


def realize_inverse_of_poly(f: NCPoly, method: str = "terms", minimal: bool = True) -> Realization:
    """Minimal realization of f^-1 for f(0) = 1."""
    _require_regular(f)
    R = invert_realization(realize_polynomial(f, method))
    return minimize(R) if minimal else R


def higman_linearize(f: NCPoly) -> tuple[MonicPencil, int]:
    """Monic pencil stably associated to f, by repeatedly decoupling the last letter."""
    _require_regular(f)
    g = f.g
    M: dict = {(0, 0): f}
    size = 1
    work = [(0, 0)] if f.degree() >= 2 else []
    while work:
        r, s = work.pop()
        p = M[(r, s)]
        low = {w: a for w, a in p.items() if len(w) <= 1}
        tails: dict = {}
        for w, a in p.items():
            if len(w) >= 2:
                tails.setdefault(w[-1], {})[w[:-1]] = a
        M[(r, s)] = NCPoly(g, low)
        new = []
        for j in sorted(tails):
            m = size
            size += 1
            q = NCPoly(g, tails[j])
            M[(r, m)] = q
            M[(m, s)] = NCPoly(g, {(j,): -1})
            M[(m, m)] = NCPoly.one(g)
            if q.degree() >= 2:
                new.append((r, m))
        work.extend(reversed(new))
    coeffs = []
    for j in range(1, g + 1):
        rows = [[0] * size for _ in range(size)]
        for (r, s), p in M.items():
            a = p.coefficient((j,))
            if a:
                rows[r][s] = -a
        coeffs.append(QMatrix(rows, size))
    return MonicPencil(MatrixTuple(coeffs)), size


def realization_to_poly(R: Realization) -> NCPoly:
    """Expand a realization whose state matrices are jointly nilpotent."""
    if R.d and not is_jointly_nilpotent(list(R.A)):
        raise ValueError("state matrices are not jointly nilpotent; the realization is not a polynomial")
    terms = {(): R.delta}
    layer = {(j + 1,): v for j, v in enumerate(R.b) if any(v)}
    depth = 0
    while layer:
        for w, v in layer.items():
            a = sum((x * y for x, y in zip(R.c, v)), Fraction(0))
            if a:
                terms[w] = terms.get(w, 0) + a
        depth += 1
        if depth > R.d:
            break
        nxt = {}
        for w, v in layer.items():
            for i, M in enumerate(R.A):
                u = M.apply(v)
                if any(u):
                    nxt[(i + 1,) + w] = u
        layer = nxt
    return NCPoly(R.g, terms)


def similarity_between(R1: Realization, R2: Realization) -> QMatrix:
    """T with T A1 T^-1 = A2, T b1 = b2, c1^T T^-1 = c2^T."""
    if R1.g != R2.g or R1.d != R2.d:
        raise ValueError("realizations differ in shape")
    if R1.delta != R2.delta:
        raise ValueError("realizations have different constant terms")
    d = R1.d
    if d == 0:
        return QMatrix.identity(0)
    vecs, labels = _controllability(R1.A, R1.b, d)
    if len(vecs) != d:
        raise ValueError("first realization is not controllable")
    cols2 = []
    for w, j in labels:
        v = R2.b[j]
        for a in reversed(w):
            v = R2.A[a].apply(v)
        cols2.append(v)
    K1 = QMatrix.from_columns(vecs, d)
    K2 = QMatrix.from_columns(cols2, d)
    T = K2 @ K1.inverse()
    ok = (
        T.det() != 0
        and all(T @ M1 == M2 @ T for M1, M2 in zip(R1.A, R2.A))
        and all(T.apply(u) == v for u, v in zip(R1.b, R2.b))
        and T.T.apply(R2.c) == R1.c
    )
    if not ok:
        raise ValueError("no similarity: the realizations are not minimal realizations of the same expression")
    return T


@dataclass(frozen=True)
class MinimalSplit:
    """f^-1 = left * right, realized in the basis [S | complement]."""

    left: Realization
    right: Realization
    basis: QMatrix
    subspace: Subspace
    complement: Subspace


def _column(v) -> QMatrix:
    return QMatrix([[x] for x in v], 1)


def _solve_affine(rows: list, rhs: list, nunk: int):
    """Particular solution and null space basis of rows @ x = rhs, or None."""
    if not rows:
        return [Fraction(0)] * nunk, [tuple(Fraction(int(i == k)) for i in range(nunk)) for k in range(nunk)]
    M = QMatrix(rows, nunk)
    x = solve(M, _column(rhs))
    if x is None:
        return None
    return list(x.col(0)), kernel(M).vectors()


def split_at_invariant_subspace(R: Realization, S: Subspace, seed=0, tries: int = 8) -> MinimalSplit:
    """Split a minimal realization R = (1, c, B, b) of f^-1 (B - b c^T jointly
    nilpotent) along a B-invariant subspace S.

    Produces a complement S' of S, invariant under B - b c^T, such that in the
    basis [S | S'] the coupling blocks of B factor as b_1 c_2^T. Then
    f^-1 = r1 * r2 with r1, r2 the inverses of polynomials.
    """
    if R.delta != 1:
        raise ValueError("expected delta = 1")
    d, g = R.d, R.g
    k = S.dim
    if not 0 < k < d:
        raise ValueError("subspace must be proper and nonzero")
    if not is_invariant(S, R.A):
        raise ValueError("subspace is not invariant under the state matrices")
    rng = random.Random(seed)

    M0 = extend_to_basis(S)
    M0i = M0.inverse()
    Bp = [M0i @ M @ M0 for M in R.A]
    bp = [M0i.apply(v) for v in R.b]
    cp = M0.T.apply(R.c)
    c1, c20 = cp[:k], cp[k:]
    q = d - k
    B22 = [M.submatrix(range(k, d), range(k, d)) for M in Bp]
    b2 = [v[k:] for v in bp]
    b1 = [v[:k] for v in bp]
    # realization of f: (1, -c', B' - b' c'^T, b')
    cprow = QMatrix([cp], d)
    Af = [M - _column(v) @ cprow for M, v in zip(Bp, bp)]
    cf = [-x for x in cp]

    # product realization of (r2 * f): state (quotient part ; f part)
    cfrow = QMatrix([cf], d)
    Mprod = [
        QMatrix.block([[B22[j], _column(b2[j]) @ cfrow], [QMatrix.zeros(d, q), Af[j]]]) for j in range(g)
    ]
    bprod = [tuple(b2[j]) + tuple(bp[j]) for j in range(g)]

    # the quotient pieces of the solution are fixed; only c2 and the complement vary
    candidates = []
    layer = [v for v in bprod]
    for D in range(1, k + 1):
        layer = [Mj.apply(v) for v in layer for Mj in Mprod]
        eb = EchelonBasis(q + d)
        basis = []
        for v in layer:
            if eb.add(v):
                basis.append(v)
        # grow to the invariant closure
        i = 0
        while i < len(basis):
            for Mj in Mprod:
                u = Mj.apply(basis[i])
                if eb.add(u):
                    basis.append(u)
            i += 1
        rows = [list(v[:q]) for v in basis]
        rhs = [sum((x * y for x, y in zip(cp, v[q:])), Fraction(0)) for v in basis]
        sol = _solve_affine(rows, rhs, q)
        if sol is None:
            continue
        part, null = sol
        candidates.append(tuple(part))
        for _ in range(tries if null else 0):
            coeffs = [rng.randint(-2, 2) for _ in null]
            candidates.append(tuple(p + sum((a * n[i] for a, n in zip(coeffs, null)), Fraction(0)) for i, p in enumerate(part)))
        break

    Sb = S.basis
    C0 = M0.submatrix(range(d), range(k, d))
    c1col = c1
    for c2 in candidates:
        c2row = QMatrix([c2], q)
        N2 = [B22[j] - _column(b2[j]) @ c2row for j in range(g)]
        if not is_jointly_nilpotent(N2):
            continue
        # unknown Y (k x q): P_j Y - Y N2_j + R_j = 0 and c1^T Y = c2 - c20
        rows, rhs = [], []
        c1row = QMatrix([c1col], k)
        for j in range(g):
            P = Bp[j].submatrix(range(k), range(k)) - _column(b1[j]) @ c1row
            Rm = Bp[j].submatrix(range(k), range(k, d)) - _column(b1[j]) @ QMatrix([c20], q)
            for a in range(k):
                for bcol in range(q):
                    row = [Fraction(0)] * (k * q)
                    for l in range(k):
                        row[l * q + bcol] += P[a, l]
                    for l in range(q):
                        row[a * q + l] -= N2[j][l, bcol]
                    rows.append(row)
                    rhs.append(-Rm[a, bcol])
        for bcol in range(q):
            row = [Fraction(0)] * (k * q)
            for a in range(k):
                row[a * q + bcol] = c1col[a]
            rows.append(row)
            rhs.append(c2[bcol] - c20[bcol])
        sol = _solve_affine(rows, rhs, k * q)
        if sol is None:
            continue
        y = sol[0]
        Y = QMatrix([y[a * q:(a + 1) * q] for a in range(k)], q)
        C = C0 + Sb @ Y
        basis_mat = Sb.hstack(C)
        comp = Subspace(d, C.columns())
        Rn = R.conjugate(basis_mat.inverse())
        left = Realization(1, Rn.c[:k], [M.submatrix(range(k), range(k)) for M in Rn.A], [v[:k] for v in Rn.b], g)
        right = Realization(1, Rn.c[k:], [M.submatrix(range(k, d), range(k, d)) for M in Rn.A], [v[k:] for v in Rn.b], g)
        ok = all(
            M.submatrix(range(k), range(k, d)) == _column(v[:k]) @ QMatrix([Rn.c[k:]], q)
            for M, v in zip(Rn.A, Rn.b)
        ) and all(M.submatrix(range(k, d), range(k)).is_zero() for M in Rn.A)
        Ax = [M - _column(v) @ QMatrix([R.c], d) for M, v in zip(R.A, R.b)]
        if not ok or not is_invariant(comp, Ax) or not is_complementary(S, comp):
            raise AssertionError("internal error: split verification failed")
        return MinimalSplit(left, right, basis_mat, S, comp)
    raise ValueError("no minimal factorization along this subspace")
