from fractions import Fraction

import numpy as np
import pytest

from _gen import SQUARES_PENCIL
from freeloci import spectra
from freeloci.linalg import QMatrix, kernel
from freeloci.pencil import MonicPencil


def test_kernel_dim_matches_exact():
    X = [QMatrix([[1, 0], [0, 1]]), QMatrix([[0, 0], [-1, -1]])]
    exact = kernel(SQUARES_PENCIL.evaluate(X)).dim
    pc = spectra.classify_point(spectra.NumericPencil.from_exact(SQUARES_PENCIL), [np.array(x.tolist(), dtype=float) for x in X])
    assert pc.kernel_dim == exact == 1


def test_adjugate_identity():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.allclose(spectra.adjugate(M) @ M, np.linalg.det(M) * np.eye(4))
    S = np.diag([1.0, 2.0, 0.0])
    assert np.allclose(spectra.adjugate(S), np.diag([0, 0, 2.0]))


def test_gradient_finite_difference():
    L = spectra.random_hermitian_pencil(2, 2, 4)
    rng = np.random.default_rng(4)
    X = [rng.standard_normal((2, 2)) for _ in range(2)]
    G = spectra.det_gradient(L, X)
    h = 1e-6
    E = np.zeros((2, 2))
    E[0, 1] = h
    fd = (np.linalg.det(spectra.evaluate(L, [X[0], X[1] + E])) - np.linalg.det(spectra.evaluate(L, [X[0], X[1] - E]))) / (2 * h)
    assert abs(G[1, 0, 1] - fd) < 1e-5 * max(1, abs(fd))


def test_psd_membership():
    L = spectra.HPencil([np.diag([1.0, -1.0])])
    assert spectra.psd_membership(L, [np.array([[0.5]])])
    assert spectra.psd_membership(L, [np.array([[1.0]])])
    assert not spectra.psd_membership(L, [np.array([[1.5]])])
    with pytest.raises(ValueError):
        spectra.psd_membership(L, [np.array([[0, 1], [0, 0]])])


def test_hermitian_validation():
    with pytest.raises(ValueError):
        spectra.HPencil([np.array([[0, 1], [0, 0]])])


def test_boundary_points_are_on_boundary():
    L = spectra.random_hermitian_pencil(3, 2, 1)
    bs = spectra.boundary_sample(L, 2, 20, seed=1)
    assert not bs.empty
    for X, pc, t in bs.points:
        assert pc.kernel_dim >= 1 and pc.in_domain and pc.on_boundary
    again = spectra.boundary_sample(L, 2, 20, seed=1)
    assert [t for _, _, t in again.points] == [t for _, _, t in bs.points]


def test_direct_sum_smoothness():
    L = spectra.random_hermitian_pencil(2, 2, 7)
    bs = spectra.boundary_sample(L, 2, 10, seed=7)
    X = next(X for X, pc, _ in bs.points if pc.smooth)
    Y_off = [np.zeros((1, 1)), np.zeros((1, 1))]
    rep = spectra.direct_sum_smoothness(L, X, Y_off)
    assert rep["consistent"] and rep["expected_smooth"]
    rep2 = spectra.direct_sum_smoothness(L, X, X)
    assert rep2["Y_on_locus"] and rep2["consistent"]


def test_hair_span():
    L = spectra.random_hermitian_pencil(2, 2, 3)
    rep = spectra.hair_span_estimate(L, 50, seed=3)
    assert rep["dimension"] == 2


def test_json_round_trip():
    L = spectra.NumericPencil.from_exact(MonicPencil([[[1, Fraction(1, 2)], [0, 1]]]))
    assert np.allclose(spectra.NumericPencil.from_json(L.to_json()).coeffs[0], L.coeffs[0])
