"""Factorization of noncommutative polynomials into atoms, and comparison of
free loci via irreducible blocks of minimal pencils."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

import sympy

from .linalg import QMatrix, char_poly, format_rational, kernel, kron
from .matalg import (
    DEFAULT_MAX_TRIALS,
    Irreducible,
    NeedsExtension,
    NeedsExtensionError,
    fl_minimal_blocks,
    find_invariant_subspace,
    irreducible_invariant_subspace,
    is_irreducible_pencil,
    is_jointly_nilpotent,
)
from .ncpoly import NCPoly, eval_nc
from .pencil import MatrixTuple, MonicPencil
from .realization import (
    NotRegularError,
    Realization,
    invert_realization,
    realization_to_poly,
    realize_inverse_of_poly,
    split_at_invariant_subspace,
)

__all__ = [
    "Factorization",
    "LocusComparison",
    "factor",
    "is_atom",
    "minimal_pencil",
    "locus_equal",
    "locus_subset",
    "stably_associated_atoms",
    "conv_thresholds",
    "flip_poly_construct",
    "flip_poly_obstruction",
]


def _normalize(f: NCPoly) -> tuple[Fraction, NCPoly]:
    unit = f.constant_term()
    if unit == 0:
        raise NotRegularError(
            "f(0) = 0: translate the variables by a scalar point where f does not vanish, then factor"
        )
    return unit, f.scalar_mul(1 / unit)


def _inverse_realization(h: NCPoly) -> Realization:
    return realize_inverse_of_poly(h, method="trie")


def minimal_pencil(f: NCPoly) -> MonicPencil | None:
    """Pencil of the minimal realization of f^-1 (None for constants)."""
    _, h = _normalize(f)
    R = _inverse_realization(h)
    return R.pencil() if R.d else None


@dataclass
class Factorization:
    unit: Fraction
    factors: list
    seed: object
    certificates: list = field(default_factory=list)
    complete: bool = True

    def product(self) -> NCPoly:
        g = self.factors[0].g if self.factors else 1
        out = NCPoly.const(self.unit, g)
        for p in self.factors:
            out = out * p
        return out

    def to_json(self) -> dict:
        return {
            "unit": format_rational(self.unit),
            "factors": [str(p) for p in self.factors],
            "seed": self.seed,
            "certificates": self.certificates,
            "complete": self.complete,
        }


def factor(f: NCPoly, seed=0, max_trials: int = DEFAULT_MAX_TRIALS) -> Factorization:
    """Atomic factorization f = unit * f_1 * ... * f_l, peeling atoms from the right."""
    unit, h = _normalize(f)
    rng = random.Random(seed)
    right: list[NCPoly] = []
    certs: list = []
    while h.degree() > 0:
        R = _inverse_realization(h)
        res = find_invariant_subspace(list(R.A), rng, max_trials)
        if res is Irreducible:
            certs.append({"atom": str(h), "pencil_size": R.d, "certificate": "irreducible pencil"})
            right.append(h)
            h = NCPoly.one(h.g)
            break
        try:
            if isinstance(res, NeedsExtension):
                raise NeedsExtensionError(res.reason)
            S = irreducible_invariant_subspace(list(R.A), rng, max_trials, start=res)
        except NeedsExtensionError as exc:
            partial = Factorization(unit, [h] + right[::-1], seed, certs, complete=False)
            raise NeedsExtensionError(str(exc), partial=partial) from exc
        split = split_at_invariant_subspace(R, S, seed=rng.randrange(2**31))
        f1 = realization_to_poly(invert_realization(split.left))
        h2 = realization_to_poly(invert_realization(split.right))
        if h2 * f1 != h:
            raise AssertionError("internal error: split does not multiply back")
        certs.append(
            {
                "atom": str(f1),
                "pencil_size": split.left.d,
                "subspace": S.to_json(),
                "complement": split.complement.to_json(),
                "certificate": "irreducible pencil" if is_irreducible_pencil(split.left.A) else "size 1",
            }
        )
        right.append(f1)
        h = h2
    factors = right[::-1]
    if not factors:
        factors = []
    return Factorization(unit, factors, seed, certs[::-1])


def is_atom(f: NCPoly) -> bool:
    L = minimal_pencil(f)
    return L is not None and is_irreducible_pencil(L)


@dataclass
class LocusComparison:
    equal: bool
    subset: bool
    superset: bool
    witness: list | None = None
    witness_side: str | None = None

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "subset": self.subset,
            "superset": self.superset,
            "witness": None if self.witness is None else [M.to_json() for M in self.witness],
            "witness_side": self.witness_side,
        }


def _blocks(f: NCPoly, seed) -> list[MonicPencil]:
    L = minimal_pencil(f)
    if L is None:
        return []
    return fl_minimal_blocks(L, seed)


def _covered(B1: list, B2: list) -> bool:
    from .matalg import pencil_similar

    return all(any(pencil_similar(P, Q) is not None for Q in B2) for P in B1)


def _locus_point(L: MonicPencil, n: int, rng: random.Random):
    """Scale a random integer tuple onto the free locus of L when a rational scale exists."""
    X = [QMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]) for _ in range(L.g)]
    M = QMatrix.zeros(L.d * n, L.d * n)
    for A, Xj in zip(L.coeffs, X):
        M = M + kron(A, Xj)
    cp = char_poly(M)
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(a.numerator, a.denominator) * t**i for i, a in enumerate(cp))
    out = []
    for r in sorted(sympy.roots(sympy.Poly(expr, t), filter="Q").keys(), key=lambda r: (abs(r), r)):
        if r != 0:
            lam = Fraction(int(sympy.fraction(r)[0]), int(sympy.fraction(r)[1]))
            out.append([Xj.scale(1 / lam) for Xj in X])
    return out


def _witness(f1: NCPoly, f2: NCPoly, seed, tries: int = 200):
    rng = random.Random(seed)
    L = minimal_pencil(f1)
    if L is None:
        return None
    for n in (1, 2, 3):
        for _ in range(tries):
            for X in _locus_point(L, n, rng):
                if eval_nc(f1, X).det() == 0 and eval_nc(f2, X).det() != 0:
                    return X
    return None


def _compare(f1: NCPoly, f2: NCPoly, seed) -> LocusComparison:
    g = max(f1.g, f2.g)
    f1, f2 = f1.with_g(g), f2.with_g(g)
    B1, B2 = _blocks(f1, seed), _blocks(f2, seed)
    sub = _covered(B1, B2)
    sup = _covered(B2, B1)
    return LocusComparison(sub and sup, sub, sup)


def locus_equal(f1: NCPoly, f2: NCPoly, seed=0, witness: bool = True) -> LocusComparison:
    res = _compare(f1, f2, seed)
    if not res.equal and witness:
        g = max(f1.g, f2.g)
        a, b = f1.with_g(g), f2.with_g(g)
        if not res.subset:
            res.witness, res.witness_side = _witness(a, b, seed), "first"
        if res.witness is None and not res.superset:
            res.witness, res.witness_side = _witness(b, a, seed), "second"
        if res.witness is None:
            res.witness_side = None
    return res


def locus_subset(f1: NCPoly, f2: NCPoly, seed=0) -> bool:
    return _compare(f1, f2, seed).subset


def stably_associated_atoms(f1: NCPoly, f2: NCPoly):
    """Invertible P relating the minimal pencils of two atoms, or None."""
    from .matalg import pencil_similar

    for f in (f1, f2):
        if f.constant_term() != 1:
            raise NotRegularError("expected constant term 1")
        if not is_atom(f):
            raise ValueError(f"{f} is not an atom")
    g = max(f1.g, f2.g)
    L1, L2 = minimal_pencil(f1.with_g(g)), minimal_pencil(f2.with_g(g))
    return pencil_similar(L1, L2)


def _ceil_sqrt_plus(R: Fraction, a: Fraction) -> int:
    """ceil(sqrt(R) + a), exactly."""
    p, q = R.numerator, R.denominator
    m = isqrt(p * q) // q + int(a) - 2
    while True:
        # sqrt(R) <= m - a  <=>  m - a >= 0 and R <= (m - a)^2
        if m - a >= 0 and R <= (m - a) ** 2:
            return m
        m += 1


def conv_thresholds(delta: int, d: int) -> tuple[int, int]:
    """Sizes above which irreducibility of the generic determinant certifies an atom."""
    if delta <= 1 or d <= 1:
        raise ValueError("need degree > 1 and pencil size > 1")
    n1 = -(-delta // 2)
    if d == 2:
        return n1, 1
    R = Fraction((d - 1) ** 2) * (Fraction(2 * (d - 1) ** 2, d - 2) + Fraction(1, 4))
    return n1, _ceil_sqrt_plus(R, Fraction(d - 1, 2) - 2)


def flip_poly_construct(N: Sequence[QMatrix], b: Sequence, c: Sequence) -> tuple[MonicPencil, NCPoly]:
    """Pencil I - sum (N_j - b_j c^T) x_j and the polynomial 1 + c^T (I - sum N_j x_j)^-1 sum b_j x_j."""
    N = list(MatrixTuple(N))
    if not is_jointly_nilpotent(N):
        raise ValueError("N is not jointly nilpotent")
    R = Realization(1, c, N, b)
    f = realization_to_poly(R)
    crow = QMatrix([R.c], R.d)
    coeffs = [M - QMatrix([[x] for x in bj], 1) @ crow for M, bj in zip(R.A, R.b)]
    return MonicPencil(MatrixTuple(coeffs)), f


def flip_poly_obstruction(L: MonicPencil) -> list | None:
    """Nonzero rational eigenvalues of some coefficient with geometric multiplicity >= 2."""
    found = []
    t = sympy.Symbol("t")
    for j, A in enumerate(L.coeffs, start=1):
        cp = char_poly(A)
        expr = sum(sympy.Rational(a.numerator, a.denominator) * t**i for i, a in enumerate(cp))
        for r in sorted(sympy.roots(sympy.Poly(expr, t), filter="Q").keys()):
            if r == 0:
                continue
            lam = Fraction(int(sympy.fraction(r)[0]), int(sympy.fraction(r)[1]))
            geo = kernel(A - QMatrix.identity(A.rows).scale(lam)).dim
            if geo >= 2:
                found.append({"coefficient": j, "eigenvalue": format_rational(lam), "geometric_multiplicity": geo})
    return found or None
