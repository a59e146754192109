"""The algebra generated by a matrix tuple: spans, invariant subspaces,
joint nilpotency, block triangular forms and similarity of pencils."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .cpoly import DEFAULT_SIZE_CAP, det_generic
from .linalg import (
    EchelonBasis,
    QMatrix,
    Subspace,
    annihilator,
    char_poly,
    extend_to_basis,
    is_invariant,
    kernel,
)
from .pencil import MonicPencil

__all__ = [
    "Irreducible",
    "NeedsExtension",
    "NeedsExtensionError",
    "PencilDecomposition",
    "word_eval",
    "algebra_span",
    "is_irreducible_pencil",
    "is_jointly_nilpotent",
    "common_kernel",
    "closure",
    "restrict",
    "find_invariant_subspace",
    "irreducible_invariant_subspace",
    "block_triangularize",
    "fl_minimal_blocks",
    "pencil_similar",
    "degree_growth",
    "DEFAULT_MAX_TRIALS",
]

DEFAULT_MAX_TRIALS = 64


class _IrreducibleType:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Irreducible"


Irreducible = _IrreducibleType()


@dataclass(frozen=True)
class NeedsExtension:
    """No rational invariant subspace was found although the tuple is reducible over an extension."""

    reason: str
    rationally_irreducible: bool = False


class NeedsExtensionError(Exception):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _mats(A) -> list[QMatrix]:
    if isinstance(A, MonicPencil):
        return list(A.coeffs)
    return [M if isinstance(M, QMatrix) else QMatrix(M) for M in A]


def word_eval(A, w: Sequence[int]) -> QMatrix:
    mats = _mats(A)
    n = mats[0].rows
    out = QMatrix.identity(n)
    for j in w:
        out = out @ mats[j - 1]
    return out


def algebra_span(A) -> list[QMatrix]:
    """Basis of the unital algebra generated by the tuple."""
    mats = _mats(A)
    n = mats[0].rows
    eb = EchelonBasis(n * n)
    I = QMatrix.identity(n)
    eb.add(I.entries)
    basis = [I]
    i = 0
    while i < len(basis) and len(basis) < n * n:
        E = basis[i]
        for M in mats:
            P = M @ E
            if eb.add(P.entries):
                basis.append(P)
        i += 1
    return basis


def is_irreducible_pencil(L) -> bool:
    mats = _mats(L)
    n = mats[0].rows
    return len(algebra_span(mats)) == n * n


def common_kernel(A) -> Subspace:
    mats = _mats(A)
    stacked = mats[0]
    for M in mats[1:]:
        stacked = stacked.vstack(M)
    return kernel(stacked)


def restrict(A, S: Subspace) -> list[QMatrix]:
    """Action of each matrix on an invariant subspace, in S's canonical basis."""
    out = []
    for M in _mats(A):
        cols = [S.coordinates(M.apply(v)) for v in S.vectors()]
        out.append(QMatrix.from_columns(cols, S.dim))
    return out


def quotient(A, S: Subspace) -> tuple[list[QMatrix], QMatrix]:
    """Action on Q^n / S using the complement from extend_to_basis; also returns the basis."""
    mats = _mats(A)
    k = S.dim
    n = mats[0].rows
    M = extend_to_basis(S)
    Mi = M.inverse()
    return [(Mi @ X @ M).submatrix(range(k, n), range(k, n)) for X in mats], M


def is_jointly_nilpotent(A) -> bool:
    mats = _mats(A)
    if not mats:
        return True
    while mats and mats[0].rows > 0:
        n = mats[0].rows
        K = common_kernel(mats)
        if K.dim == 0:
            return False
        if K.dim == n:
            return True
        mats, _ = quotient(mats, K)
    return True


def closure(A, vectors, n: int | None = None) -> Subspace:
    """Smallest subspace containing the vectors and invariant under every matrix."""
    mats = _mats(A)
    n = mats[0].rows if n is None else n
    eb = EchelonBasis(n)
    queue = []
    for v in vectors:
        if eb.add(v):
            queue.append(tuple(v))
    i = 0
    while i < len(queue) and len(queue) < n:
        v = queue[i]
        for M in mats:
            w = M.apply(v)
            if eb.add(w):
                queue.append(w)
        i += 1
    return Subspace(n, queue)


def _poly_at(coeffs_low_first, R: QMatrix) -> QMatrix:
    n = R.rows
    out = QMatrix.zeros(n, n)
    for a in reversed(coeffs_low_first):
        out = out @ R + QMatrix.identity(n).scale(a)
    return out


def _rational_factors(cp: Sequence[Fraction]) -> list[list[Fraction]]:
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(a.numerator, a.denominator) * t**i for i, a in enumerate(cp))
    _, facs = sympy.factor_list(expr, t)
    out = []
    for p, _mult in facs:
        coeffs = sympy.Poly(p, t).all_coeffs()[::-1]
        out.append([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs])
    out.sort(key=lambda c: (len(c), c))
    return out


def _random_vector(S: Subspace, rng: random.Random) -> tuple:
    coeffs = [rng.randint(-3, 3) for _ in range(S.dim)]
    if not any(coeffs):
        coeffs[rng.randrange(S.dim)] = 1
    return S.basis.apply(coeffs)


def find_invariant_subspace(A, seed=0, max_trials: int = DEFAULT_MAX_TRIALS):
    """Irreducible, a proper nonzero invariant Subspace, or NeedsExtension."""
    rng = _rng(seed)
    mats = _mats(A)
    n = mats[0].rows
    if n < 1:
        raise ValueError("ambient dimension must be at least 1")
    basis = algebra_span(mats)
    if len(basis) == n * n:
        return Irreducible
    K = common_kernel(mats)
    if 0 < K.dim < n:
        return K
    if K.dim == n:
        # all coefficients vanish: every subspace is invariant
        return Subspace(n, [[int(i == 0) for i in range(n)]])
    Kt = common_kernel([M.T for M in mats])
    if 0 < Kt.dim < n:
        return annihilator(Kt)
    certified = False
    for _ in range(max_trials):
        R = QMatrix.zeros(n, n)
        for E in basis:
            c = rng.randint(-3, 3)
            if c:
                R = R + E.scale(c)
        for p in _rational_factors(char_poly(R)):
            N = _poly_at(p, R)
            ker = kernel(N)
            v = _random_vector(ker, rng)
            S = closure(mats, [v], n)
            if S.dim < n:
                return S
            w = _random_vector(kernel(N.T), rng)
            St = closure([M.T for M in mats], [w], n)
            if St.dim < n:
                return annihilator(St)
            if ker.dim == len(p) - 1:
                # Norton's criterion: the module has no proper rational submodule
                certified = True
                break
        if certified:
            break
    return NeedsExtension(
        reason="reducible over an algebraic extension, but no rational invariant subspace was found",
        rationally_irreducible=certified,
    )


def irreducible_invariant_subspace(A, seed=0, max_trials: int = DEFAULT_MAX_TRIALS, start: Subspace | None = None) -> Subspace:
    """A minimal nonzero invariant subspace (inside `start` when given)."""
    rng = _rng(seed)
    mats = _mats(A)
    if start is None:
        res = find_invariant_subspace(mats, rng, max_trials)
        if res is Irreducible:
            raise ValueError("tuple is irreducible: it has no proper invariant subspace")
        if isinstance(res, NeedsExtension):
            raise NeedsExtensionError(res.reason)
        S = res
    else:
        if not is_invariant(start, mats) or start.dim == 0:
            raise ValueError("start must be a nonzero invariant subspace")
        S = start
    while S.dim > 1:
        sub = restrict(mats, S)
        res = find_invariant_subspace(sub, rng, max_trials)
        if res is Irreducible:
            break
        if isinstance(res, NeedsExtension):
            raise NeedsExtensionError(res.reason, partial=S)
        S = Subspace(S.ambient_dim, [S.basis.apply(v) for v in res.vectors()])
    return S


@dataclass
class PencilDecomposition:
    T: QMatrix
    blocks: list  # list of (MonicPencil, kind)
    complete: bool = True
    seed: object = None

    @property
    def block_sizes(self) -> list[int]:
        return [B.d for B, _ in self.blocks]

    def to_json(self) -> dict:
        return {
            "T": self.T.to_json(),
            "blocks": [{"kind": kind, "pencil": B.to_json()} for B, kind in self.blocks],
            "block_sizes": self.block_sizes,
            "complete": self.complete,
        }


def _kind(mats: list[QMatrix]) -> str:
    if all(M.is_zero() for M in mats):
        return "identity"
    return "irreducible"


def block_triangularize(L: MonicPencil, seed=0, max_trials: int = DEFAULT_MAX_TRIALS) -> PencilDecomposition:
    """Basis change T with T A_j T^-1 block upper triangular, diagonal blocks
    irreducible or zero. On NeedsExtension the last block is left unsplit and
    the result is flagged incomplete."""
    rng = _rng(seed)
    d = L.d
    # basis columns built up in flag order; current quotient acts on the remaining part
    flag_cols: list[tuple] = []
    blocks = []
    mats = list(L.coeffs)
    # Q: columns spanning a complement of the flag so far, in ambient coordinates
    Q = QMatrix.identity(d)
    complete = True
    while mats and mats[0].rows > 0:
        m = mats[0].rows
        if m == 1 or len(algebra_span(mats)) == m * m:
            S = Subspace.full(m)
        else:
            try:
                S = irreducible_invariant_subspace(mats, rng, max_trials)
            except NeedsExtensionError:
                S = Subspace.full(m)
                complete = False
        k = S.dim
        sub = restrict(mats, S)
        kind = _kind(sub)
        if S.dim == m and not complete:
            kind = "needs-extension"
        blocks.append((MonicPencil(sub), kind))
        flag_cols.extend(Q.apply(v) for v in S.vectors())
        if k == m:
            break
        qm, M = quotient(mats, S)
        Q = Q @ M.submatrix(range(m), range(k, m))
        mats = qm
    B = QMatrix.from_columns(flag_cols, d)
    T = B.inverse()
    return PencilDecomposition(T=T, blocks=blocks, complete=complete, seed=None if isinstance(seed, random.Random) else seed)


def pencil_similar(L1: MonicPencil, L2: MonicPencil, grid_limit: int = 4096, seed: int = 0):
    """Invertible P with P A1_j = A2_j P for all j, or None."""
    if L1.d != L2.d or L1.g != L2.g:
        return None
    d = L1.d
    rows = []
    for A1, A2 in zip(L1.coeffs, L2.coeffs):
        for i in range(d):
            for k in range(d):
                row = [Fraction(0)] * (d * d)
                for l in range(d):
                    row[i * d + l] += A1[l, k]
                    row[l * d + k] -= A2[i, l]
                rows.append(row)
    sol = kernel(QMatrix(rows, d * d))
    m = sol.dim
    if m == 0:
        return None
    gens = [QMatrix([v[i * d:(i + 1) * d] for i in range(d)]) for v in sol.vectors()]

    def combo(point):
        P = QMatrix.zeros(d, d)
        for c, G in zip(point, gens):
            if c:
                P = P + G.scale(c)
        return P

    # the determinant of a generic combination has degree <= d, so a grid
    # {0..d}^m contains a nonvanishing point whenever the polynomial is nonzero
    k = d
    if (k + 1) ** m <= grid_limit:
        points = itertools.product(range(k + 1), repeat=m)
    else:
        rng = random.Random(seed)
        points = (tuple(rng.randint(0, 10 * d) for _ in range(m)) for _ in range(grid_limit))
    for pt in points:
        if not any(pt):
            continue
        P = combo(pt)
        if P.det() != 0:
            return P
    return None


def fl_minimal_blocks(L: MonicPencil, seed=0, max_trials: int = DEFAULT_MAX_TRIALS) -> list[MonicPencil]:
    dec = block_triangularize(L, seed, max_trials)
    if not dec.complete:
        raise NeedsExtensionError("block decomposition needs a field extension", partial=dec)
    out: list[MonicPencil] = []
    for B, kind in dec.blocks:
        if kind == "identity":
            continue
        if not any(pencil_similar(B, C) is not None for C in out):
            out.append(B)
    out.sort(key=lambda B: B.sort_key())
    return out


@dataclass
class DegreeGrowth:
    degrees: list  # (n, degree) pairs
    d_L: Fraction | None
    note: str = field(default="")

    def to_json(self) -> dict:
        return {
            "degrees": [{"n": n, "degree": k} for n, k in self.degrees],
            "d_L": None if self.d_L is None else str(self.d_L),
            "note": self.note,
        }


def degree_growth(L: MonicPencil, n_list: Sequence[int], cap: int = DEFAULT_SIZE_CAP) -> DegreeGrowth:
    degs = [(n, max(det_generic(L, n, cap).degree(), 0)) for n in n_list]
    ratios = {Fraction(k, n) for n, k in degs}
    d_L = ratios.pop() if len(ratios) == 1 else None
    note = f"degree is guaranteed linear in n only for n >= {L.d * L.d - 1}"
    return DegreeGrowth(degs, d_L, note)
