"""Seeded random generators and fixed examples shared by the tests."""

import itertools
from fractions import Fraction

from freeloci.factorization import is_atom, minimal_pencil
from freeloci.linalg import QMatrix
from freeloci.matalg import pencil_similar
from freeloci.ncpoly import NCPoly
from freeloci.pencil import MonicPencil

SQUARES_PENCIL = MonicPencil([[[1, 0, 0], [1, 1, 0], [0, 0, 0]], [[0, 0, 1], [0, 0, 1], [0, 1, 0]]])

F1 = "1 + x1 + x2 + x1^2*x2"
F2 = "1 + x1 + x2 + x1*x2*x1"
F3 = "1 + x1 + x2 + x2*x1^2"
TWO_WAY = "1 + 3/2*x1 + 1/2*x2 + 1/2*x1^2 + 1/2*x1*x2 + 1/2*x2*x1 + 1/2*x1*x2*x1"
# pencil and data of the minimal realization of f^-1 for TWO_WAY
TWO_WAY_B = [[["-3/2", -1, 1], ["3/2", 0, 0], [1, 0, 0]], [["-1/2", 0, "-1/2"], ["1/2", 0, "1/2"], [0, 0, 0]]]
TWO_WAY_b = [["-3/2", "3/2", 1], ["-1/2", "1/2", 0]]
TWO_WAY_c = [1, 0, 0]
TWO_WAY_N = [[[0, -1, 1], [0, 0, 0], [0, 0, 0]], [[0, 0, "-1/2"], [0, 0, "1/2"], [0, 0, 0]]]
# seeds that give each of the two factorizations of TWO_WAY
TWO_WAY_SEED_A = 1  # (1 + x1/2 + x2/2 + x1x2/2)(1 + x1)
TWO_WAY_SEED_B = 0  # (1 + x1)(1 + x1/2 + x2/2 + x2x1/2)

# a known minimal realization of f1^-1, used as a similarity target
F1_MINIMAL = dict(
    delta=1,
    c=[1, 0, 0],
    A=[[[-1, -1, 0], [0, 0, 1], [0, 0, 0]], [[-1, 0, 0], [0, 0, 0], [1, 0, 0]]],
    b=[[-1, 0, 0], [-1, 0, 1]],
)
WITNESS = [QMatrix([[1, -1], [-1, 0]]), QMatrix([[1, 1], [1, 0]])]


def rand_rational(rng, lo=-3, hi=3, dens=(1, 2, 3)):
    while True:
        q = Fraction(rng.randint(lo, hi), rng.choice(dens))
        if q:
            return q


def rand_matrix(rng, n, lo=-2, hi=2):
    return QMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def rand_tuple(rng, g, n, lo=-2, hi=2):
    return [rand_matrix(rng, n, lo, hi) for _ in range(g)]


def rand_poly(rng, g, max_deg, max_terms=4):
    """f(0)=1 with a few random words and rational coefficients."""
    terms = {(): 1}
    for _ in range(rng.randint(1, max_terms)):
        k = rng.randint(1, max_deg)
        w = tuple(rng.randint(1, g) for _ in range(k))
        terms[w] = rand_rational(rng)
    f = NCPoly(g, terms)
    if f.degree() < 1:
        return rand_poly(rng, g, max_deg, max_terms)
    return f


def rand_atom(rng, g, max_deg):
    while True:
        f = rand_poly(rng, g, max_deg, 6)
        if is_atom(f):
            return f


def rand_atom_product(rng, g=None, max_total=4):
    """A product of 1-3 random atoms of total degree <= max_total; returns (f, atoms)."""
    g = g or rng.randint(1, 3)
    k = rng.randint(1, 3)
    atoms = []
    budget = max_total
    for i in range(k):
        left = k - i - 1
        if budget - left < 1:
            break
        atoms.append(rand_atom(rng, g, min(2, budget - left)))
        budget -= atoms[-1].degree()
    f = NCPoly.one(g)
    for a in atoms:
        f = f * a
    return f, atoms


def pencils_match(P1, P2):
    """Some bijection pairs the pencils up to similarity."""
    if len(P1) != len(P2):
        return False
    for perm in itertools.permutations(range(len(P2))):
        if all(pencil_similar(a, P2[j]) is not None for a, j in zip(P1, perm)):
            return True
    return False


def atom_pencils(factors):
    return [minimal_pencil(f) for f in factors]


def _flag_basis(A, d):
    """Basis adapted to the iterated common kernels of a jointly nilpotent tuple."""
    from freeloci.linalg import EchelonBasis, Subspace, annihilator, kernel

    eb = EchelonBasis(d)
    cols = []
    K = Subspace.zero(d)
    while len(cols) < d:
        W = annihilator(K).basis.T
        stacked = None
        for M in A:
            blk = W @ M
            stacked = blk if stacked is None else stacked.vstack(blk)
        K = kernel(stacked)
        for v in K.vectors():
            if eb.add(v):
                cols.append(v)
    return QMatrix.from_columns(cols, d)


def _refine_or_keep(B, rng, S):
    """Shrink S to an irreducible invariant subspace when that works over Q."""
    from freeloci.matalg import NeedsExtensionError, irreducible_invariant_subspace

    try:
        return irreducible_invariant_subspace(B, rng, start=S)
    except NeedsExtensionError:
        return S


def rand_perturbation_naive(rng, max_tries=100000):
    """Strictly upper triangular A, sparse b and c, with rejection sampling."""
    from freeloci.linalg import Subspace
    from freeloci.matalg import find_invariant_subspace
    from freeloci.perturbation import PerturbationData, check_nondegenerate

    for _ in range(max_tries):
        d, g = rng.randint(2, 6), rng.randint(1, 3)
        A = [QMatrix([[(rng.choice([0, 0, 1, -1, 2]) if j > i else 0) for j in range(d)] for i in range(d)]) for _ in range(g)]
        b = [[rng.choice([0, 0, 1, -1]) for _ in range(d)] for _ in range(g)]
        c = [rng.choice([0, 0, 1, -1]) for _ in range(d)]
        P = PerturbationData(A, b, c)
        if not check_nondegenerate(P):
            continue
        r = find_invariant_subspace(list(P.B), rng)
        if isinstance(r, Subspace):
            return P, _refine_or_keep(list(P.B), rng, r)
    raise RuntimeError("no instance found")


def rand_perturbation_product(rng):
    """Instance from a product of atoms: reducible B by construction, A put in strictly upper form."""
    from freeloci.matalg import find_invariant_subspace
    from freeloci.linalg import Subspace
    from freeloci.perturbation import PerturbationData
    from freeloci.realization import realize_inverse_of_poly

    while True:
        f, atoms = rand_atom_product(rng, rng.randint(1, 3), 5)
        if len(atoms) < 2:
            continue
        R = realize_inverse_of_poly(f, "trie")
        d = R.d
        if not 2 <= d <= 6:
            continue
        crow = QMatrix([R.c], d)
        A = [M - QMatrix([[x] for x in v], 1) @ crow for M, v in zip(R.A, R.b)]
        F = _flag_basis(A, d)
        U = QMatrix([[(1 if i == j else (rng.randint(-2, 2) if j > i else 0)) for j in range(d)] for i in range(d)])
        Q = F @ U
        Qi = Q.inverse()
        P = PerturbationData([Qi @ M @ Q for M in A], [Qi.apply(v) for v in R.b], Q.T.apply(R.c))
        B = list(P.B)
        r = find_invariant_subspace(B, rng)
        if not isinstance(r, Subspace):
            continue
        S = r if rng.random() < 0.3 else _refine_or_keep(B, rng, r)
        return P, S
