import pytest

from _gen import SQUARES_PENCIL
from freeloci.linalg import DimensionError, QMatrix
from freeloci.pencil import MatrixTuple, MonicPencil


def test_tuple_shape_checks():
    with pytest.raises(DimensionError):
        MatrixTuple([[[1, 0], [0, 1]], [[1]]])


def test_json_round_trip():
    assert MonicPencil.from_json(SQUARES_PENCIL.to_json()) == SQUARES_PENCIL
    T = MatrixTuple(SQUARES_PENCIL.coeffs)
    assert MatrixTuple.from_json(T.to_json()) == T
    assert MatrixTuple.from_json({"matrices": T.to_json()}) == T


def test_conjugation_preserves_determinant():
    T = QMatrix([[1, 2, 0], [0, 1, 0], [1, 0, 1]])
    X = [QMatrix([[1, 2], [0, 1]]), QMatrix([[0, 1], [1, 1]])]
    assert SQUARES_PENCIL.conjugate(T).det_at(X) == SQUARES_PENCIL.det_at(X)


def test_direct_sum_multiplies_determinants():
    L = MonicPencil([[[2]], [[1]]])
    X = [QMatrix([[1, 1], [0, 1]]), QMatrix([[0, 1], [2, 0]])]
    assert SQUARES_PENCIL.direct_sum(L).det_at(X) == SQUARES_PENCIL.det_at(X) * L.det_at(X)


def test_evaluate_at_zero_is_identity():
    Z = [QMatrix.zeros(2, 2)] * 2
    assert SQUARES_PENCIL.evaluate(Z) == QMatrix.identity(6)
