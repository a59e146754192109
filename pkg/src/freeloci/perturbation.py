"""Complementary invariant subspaces for rank-one perturbations of jointly
nilpotent tuples.

Given jointly nilpotent A_j and vectors b_j, c with (A, b) controllable and
(A, c) observable, every subspace S invariant under B_j = A_j + b_j c^T has a
complement invariant under all A_j. We build it from a chain of minimal
factorizations of the polynomial whose inverse is realized by (1, c, B, b).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .linalg import (
    DimensionError,
    QMatrix,
    Subspace,
    format_rational,
    is_complementary,
    is_invariant,
    map_subspace,
    to_fraction,
)
from .matalg import NeedsExtensionError, irreducible_invariant_subspace, is_jointly_nilpotent
from .pencil import MatrixTuple
from .realization import (
    Realization,
    _controllability,
    _observability,
    invert_realization,
    realization_to_poly,
    realize_product,
    similarity_between,
    split_at_invariant_subspace,
)

__all__ = ["PerturbationData", "DegenerateError", "check_nondegenerate", "complementary_invariant", "ComplementReport", "complementary_invariant_report"]


class DegenerateError(ValueError):
    pass


@dataclass(frozen=True)
class PerturbationData:
    A: MatrixTuple
    b: tuple
    c: tuple

    def __init__(self, A, b: Sequence, c: Sequence):
        A = A if isinstance(A, MatrixTuple) else MatrixTuple(A)
        b = tuple(tuple(to_fraction(x) for x in v) for v in b)
        c = tuple(to_fraction(x) for x in c)
        d = A.n
        if len(b) != A.g or any(len(v) != d for v in b) or len(c) != d:
            raise DimensionError("b needs one length-d vector per matrix and c length d")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def d(self) -> int:
        return self.A.n

    @property
    def g(self) -> int:
        return self.A.g

    @property
    def B(self) -> MatrixTuple:
        crow = QMatrix([self.c], self.d)
        return MatrixTuple([M + QMatrix([[x] for x in v], 1) @ crow for M, v in zip(self.A, self.b)])

    def realization(self) -> Realization:
        """(1, c, B, b): its inverse has state matrices A."""
        return Realization(1, self.c, list(self.B), self.b)

    def to_json(self) -> dict:
        return {
            "A": self.A.to_json(),
            "b": [[format_rational(x) for x in v] for v in self.b],
            "c": [format_rational(x) for x in self.c],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PerturbationData":
        return cls(MatrixTuple.from_json(data["A"]), data["b"], data["c"])


def check_nondegenerate(P: PerturbationData) -> bool:
    d = P.d
    mats = list(P.A)
    return len(_controllability(mats, P.b, d)[0]) == d and len(_observability(mats, P.c, d)) == d


@dataclass
class ComplementReport:
    complement: Subspace
    chain: list  # dims of the refinement steps
    atoms: list  # polynomials f_1, ..., f_m peeled along the chain
    remainder: object  # polynomial h with f = h * f_m * ... * f_1
    similarity: QMatrix
    refined: bool  # False when a chain step could not be refined over Q

    def to_json(self) -> dict:
        return {
            "complement": self.complement.to_json(),
            "chain_dims": self.chain,
            "atoms": [str(p) for p in self.atoms],
            "remainder": str(self.remainder),
            "similarity": self.similarity.to_json(),
            "refined": self.refined,
        }


def complementary_invariant_report(P: PerturbationData, S: Subspace, seed=0) -> ComplementReport:
    if not is_jointly_nilpotent(list(P.A)):
        raise ValueError("A is not jointly nilpotent")
    if not check_nondegenerate(P):
        raise DegenerateError("perturbation is degenerate: (A, b) must be controllable and (A, c) observable")
    d = P.d
    if S.ambient_dim != d:
        raise DimensionError("subspace lives in the wrong ambient space")
    if not 0 < S.dim < d:
        raise ValueError("subspace must be proper and nonzero")
    B = list(P.B)
    if not is_invariant(S, B):
        raise ValueError("subspace is not invariant under B")
    rng = random.Random(seed)

    R = P.realization()
    cur, target = R, S
    lefts: list[Realization] = []
    chain: list[int] = []
    refined = True
    while target.dim > 0:
        try:
            U = irreducible_invariant_subspace(list(cur.A), rng, start=target)
        except NeedsExtensionError:
            U = target
            refined = False
        split = split_at_invariant_subspace(cur, U, seed=rng.randrange(2**31))
        lefts.append(split.left)
        chain.append(U.dim)
        k = U.dim
        coords = split.basis.inverse()
        target = Subspace(cur.d - k, [coords.apply(v)[k:] for v in target.vectors()])
        cur = split.right

    big = lefts[0]
    for Rl in lefts[1:]:
        big = realize_product(big, Rl)
    big = realize_product(big, cur)
    T = similarity_between(big, R)
    k = S.dim
    head = Subspace(d, [[int(i == j) for i in range(d)] for j in range(k)])
    tail = Subspace(d, [[int(i == j) for i in range(d)] for j in range(k, d)])
    if map_subspace(T, head) != S:
        raise AssertionError("internal error: product realization is not aligned with the subspace")
    comp = map_subspace(T, tail)
    if not is_invariant(comp, list(P.A)) or not is_complementary(S, comp):
        raise AssertionError("internal error: complement verification failed")
    atoms = [realization_to_poly(invert_realization(Rl)) for Rl in lefts]
    rem = realization_to_poly(invert_realization(cur))
    return ComplementReport(comp, chain, atoms, rem, T, refined)


def complementary_invariant(P: PerturbationData, S: Subspace, seed=0) -> Subspace:
    """A subspace invariant under every A_j and complementary to S."""
    return complementary_invariant_report(P, S, seed).complement
