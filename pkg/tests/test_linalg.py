from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freeloci.linalg import (
    DimensionError,
    EchelonBasis,
    QMatrix,
    SingularMatrixError,
    Subspace,
    annihilator,
    char_poly,
    extend_to_basis,
    format_rational,
    intersect,
    is_complementary,
    kernel,
    kron,
    solve,
    subspace_sum,
    to_fraction,
)

small = st.integers(-3, 3)


def matrices(rows, cols=None):
    cols = rows if cols is None else cols
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(QMatrix)


square = st.integers(1, 4).flatmap(matrices)


def test_basic_arithmetic():
    A = QMatrix([[1, 2], [3, 4]])
    assert A.det() == -2
    assert A @ A.inverse() == QMatrix.identity(2)
    assert A.T == QMatrix([[1, 3], [2, 4]])
    assert A.rank() == 2
    assert A.inverse().tolist()[0][0] == -2


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        QMatrix([[1, 2], [2, 4]]).inverse()


def test_shape_mismatch_raises():
    with pytest.raises(DimensionError):
        QMatrix([[1, 2]]) @ QMatrix([[1, 2]])


def test_floats_rejected():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction("3/4") == Fraction(3, 4)
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(Fraction(4)) == "4"


@settings(max_examples=60, deadline=None)
@given(square)
def test_rank_nullity(A):
    assert A.rank() + kernel(A).dim == A.cols
    for v in kernel(A).vectors():
        assert all(x == 0 for x in A.apply(v))


@settings(max_examples=60, deadline=None)
@given(square)
def test_cayley_hamilton(A):
    cp = char_poly(A)
    assert cp[-1] == 1
    acc = QMatrix.zeros(A.rows, A.rows)
    for i, a in enumerate(cp):
        acc = acc + A.power(i).scale(a)
    assert acc.is_zero()
    assert cp[0] == (-1) ** A.rows * A.det()


@settings(max_examples=40, deadline=None)
@given(matrices(2), matrices(2), matrices(3), matrices(3))
def test_kron_mixed_product(A, B, C, D):
    assert kron(A, C) @ kron(B, D) == kron(A @ B, C @ D)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(matrices(n, 2), matrices(n, 2))))
def test_sum_and_intersection_dimensions(pair):
    M1, M2 = pair
    S, T = Subspace(M1.rows, M1.columns()), Subspace(M2.rows, M2.columns())
    assert subspace_sum(S, T).dim + intersect(S, T).dim == S.dim + T.dim
    for v in intersect(S, T).vectors():
        assert S.contains(v) and T.contains(v)
    assert annihilator(annihilator(S)) == S


def test_subspace_canonical_form():
    S = Subspace(3, [[1, 1, 0], [0, 1, 1]])
    T = Subspace(3, [[2, 3, 1], [1, 0, -1], [1, 1, 0]])
    assert S == T
    assert S.dim == 2
    assert S.coordinates([1, 2, 1]) is not None


def test_complement_and_extension():
    S = Subspace(3, [[1, 1, 1]])
    B = extend_to_basis(S)
    assert B.det() != 0
    assert S.contains(B.col(0))
    C = Subspace(3, [B.col(1), B.col(2)])
    assert is_complementary(S, C)
    assert not is_complementary(S, Subspace(3, [[2, 2, 2], [1, 0, 0]]))


@settings(max_examples=40, deadline=None)
@given(square, st.data())
def test_solve_particular_solution(A, data):
    X0 = data.draw(matrices(A.cols, 2))
    B = A @ X0
    X = solve(A, B)
    assert X is not None and A @ X == B


def test_solve_inconsistent():
    assert solve(QMatrix([[1, 1], [1, 1]]), QMatrix([[1], [2]])) is None


def test_echelon_basis():
    eb = EchelonBasis(3)
    assert eb.add([1, 2, 3])
    assert not eb.add([2, 4, 6])
    assert eb.add([0, 1, 0])
    assert eb.contains([1, 3, 3])
    assert not eb.contains([0, 0, 1])
