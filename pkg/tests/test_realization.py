import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import TWO_WAY, TWO_WAY_N, TWO_WAY_b, TWO_WAY_c, F1, F1_MINIMAL, rand_poly, rand_tuple
from freeloci.linalg import QMatrix, Subspace
from freeloci.matalg import common_kernel, irreducible_invariant_subspace
from freeloci.ncpoly import NCPoly, eval_nc
from freeloci.realization import (
    Realization,
    higman_linearize,
    invert_realization,
    is_minimal,
    minimize,
    realization_to_poly,
    realize_inverse_of_poly,
    realize_polynomial,
    realize_product,
    similarity_between,
    split_at_invariant_subspace,
)

seeds = st.integers(0, 10**6)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from(["terms", "trie"]))
def test_polynomial_realization_evaluates_correctly(seed, method):
    rng = random.Random(seed)
    f = rand_poly(rng, rng.randint(1, 3), 3)
    R = realize_polynomial(f, method)
    X = rand_tuple(rng, f.g, rng.randint(1, 2))
    assert R.evaluate(X) == eval_nc(f, X)
    assert realization_to_poly(R) == f


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_inverse_realization(seed):
    rng = random.Random(seed)
    f = rand_poly(rng, rng.randint(1, 2), 3)
    R = realize_inverse_of_poly(f, "trie")
    assert is_minimal(R).minimal
    assert common_kernel(list(R.A)).dim == 0
    for _ in range(3):
        X = rand_tuple(rng, f.g, 2)
        F = eval_nc(f, X)
        if F.det() != 0:
            assert R.evaluate(X) == F.inverse()
        assert R.pencil().det_at(X) == F.det()


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_minimize_is_idempotent_and_preserves_function(seed):
    rng = random.Random(seed)
    f, h = rand_poly(rng, 2, 2), rand_poly(rng, 2, 2)
    R = realize_product(realize_polynomial(f, "terms"), realize_polynomial(h, "terms"))
    M = minimize(R)
    assert is_minimal(M).minimal
    assert minimize(M).d == M.d
    assert realization_to_poly(M) == f * h


def test_f1_against_known_minimal_data():
    R = realize_inverse_of_poly(NCPoly.parse(F1, 2))
    printed = Realization(F1_MINIMAL["delta"], F1_MINIMAL["c"], F1_MINIMAL["A"], F1_MINIMAL["b"])
    assert is_minimal(printed).minimal
    T = similarity_between(R, printed)
    assert T is not None and R.conjugate(T) == printed


def test_higman_linearization():
    L, size = higman_linearize(NCPoly.parse("1 + x1*x2"))
    assert size == 2
    assert L.coeffs[0] == QMatrix([[0, -1], [0, 0]])
    assert L.coeffs[1] == QMatrix([[0, 0], [1, 0]])
    rng = random.Random(1)
    for _ in range(5):
        X = rand_tuple(rng, 2, 2)
        assert L.det_at(X) == eval_nc(NCPoly.parse("1 + x1*x2"), X).det()


def test_json_round_trip():
    R = realize_inverse_of_poly(NCPoly.parse(TWO_WAY))
    assert Realization.from_json(R.to_json()) == R


def test_invert_twice():
    f = NCPoly.parse("1 + x1 - 2*x2*x1")
    R = realize_polynomial(f)
    assert realization_to_poly(invert_realization(invert_realization(R))) == f


def test_split_reproduces_factor_product():
    R = Realization(1, TWO_WAY_c, [QMatrix(N) + QMatrix([[x] for x in b], 1) @ QMatrix([TWO_WAY_c], 3) for N, b in zip(TWO_WAY_N, TWO_WAY_b)], TWO_WAY_b)
    f = NCPoly.parse(TWO_WAY)
    for seed in range(3):
        S = irreducible_invariant_subspace(list(R.A), seed)
        sp = split_at_invariant_subspace(R, S, seed)
        f_left = realization_to_poly(invert_realization(sp.left))
        f_right = realization_to_poly(invert_realization(sp.right))
        assert f_right * f_left == f
        assert sp.left.d == S.dim


def test_split_rejects_trivial_subspace():
    R = realize_inverse_of_poly(NCPoly.parse(TWO_WAY))
    with pytest.raises(ValueError):
        split_at_invariant_subspace(R, Subspace.full(R.d))
