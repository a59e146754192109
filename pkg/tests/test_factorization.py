import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import TWO_WAY, F1, F2, F3, atom_pencils, pencils_match, rand_atom_product
from freeloci.factorization import (
    conv_thresholds,
    factor,
    flip_poly_construct,
    flip_poly_obstruction,
    is_atom,
    locus_equal,
    locus_subset,
    stably_associated_atoms,
)
from freeloci.linalg import QMatrix
from freeloci.matalg import is_jointly_nilpotent
from freeloci.ncpoly import NCPoly, eval_nc
from freeloci.pencil import MonicPencil

seeds = st.integers(0, 10**6)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_factorization_of_random_products(seed):
    rng = random.Random(seed)
    f, atoms = rand_atom_product(rng)
    F = factor(f, seed)
    assert F.product() == f
    assert all(is_atom(p) for p in F.factors)
    assert pencils_match(atom_pencils(F.factors), atom_pencils(atoms))


def test_missing_variable_does_not_change_factors():
    f = NCPoly.parse("1 + 3*x1 + 3*x1^2 + x1^3")
    F = factor(f)
    assert F.product() == f
    G = factor(f.with_g(3))
    assert [str(p) for p in G.factors] == [str(p) for p in F.factors]


def test_atom_examples():
    assert is_atom(NCPoly.parse("1 - 2*x1 + x1^2 - x2^2"))
    assert not is_atom(NCPoly.parse(TWO_WAY))
    assert is_atom(NCPoly.parse("1 + x1*x2"))


def test_constant_and_scaled():
    F = factor(NCPoly.parse("2 + 2*x1"))
    assert F.unit == 2 and [str(p) for p in F.factors] == ["1 + x1"]


def test_locus_relation_examples():
    f1, f2, f3 = (NCPoly.parse(s, 2) for s in (F1, F2, F3))
    assert locus_equal(f1, f1).equal
    assert locus_equal(f1, f3).equal and locus_equal(f3, f1).equal
    res = locus_equal(f1, f2)
    assert not res.equal and res.witness is not None
    side = f1 if res.witness_side == "first" else f2
    other = f2 if side is f1 else f1
    assert eval_nc(side, res.witness).det() == 0
    assert eval_nc(other, res.witness).det() != 0


def test_locus_subset_of_product():
    a = NCPoly.parse("1 + x1*x2")
    b = NCPoly.parse("1 - x2")
    assert locus_subset(a, a * b)
    assert not locus_subset(a * b, a)


def test_stable_association():
    P = stably_associated_atoms(NCPoly.parse("1 + x1*x2"), NCPoly.parse("1 + x2*x1"))
    assert P is not None and P.det() != 0
    assert stably_associated_atoms(NCPoly.parse("1 + x1*x2"), NCPoly.parse("1 + x1 + x2")) is None


def test_conv_thresholds():
    assert conv_thresholds(2, 2) == (1, 1)
    assert conv_thresholds(2, 3) == (1, 5)
    assert conv_thresholds(5, 2)[0] == 3
    with pytest.raises(ValueError):
        conv_thresholds(1, 3)


def test_flip_poly_construct():
    N = [QMatrix([[0, 1], [0, 0]]), QMatrix([[0, 0], [0, 0]])]
    L, f = flip_poly_construct(N, [[0, 1], [1, 0]], [1, 0])
    assert f.constant_term() == 1
    rng = random.Random(0)
    for _ in range(4):
        X = [QMatrix([[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]) for _ in range(2)]
        assert L.det_at(X) == eval_nc(f, X).det()
    with pytest.raises(ValueError):
        flip_poly_construct([QMatrix([[1]])], [[1]], [1])


def test_flip_obstruction():
    # coefficient with eigenvalue 1 of geometric multiplicity 2
    L = MonicPencil([[[1, 0, 0], [0, 1, 0], [0, 0, 0]]])
    obs = flip_poly_obstruction(L)
    assert obs and obs[0]["eigenvalue"] == "1" and obs[0]["geometric_multiplicity"] == 2
    assert flip_poly_obstruction(MonicPencil([[[1, 0], [0, 2]]])) is None


def test_jointly_nilpotent_part_of_minimal_pencil():
    from freeloci.realization import realize_inverse_of_poly

    R = realize_inverse_of_poly(NCPoly.parse(F2, 2))
    crow = QMatrix([R.c], R.d)
    assert is_jointly_nilpotent([A - QMatrix([[x] for x in b], 1) @ crow for A, b in zip(R.A, R.b)])
