import random
from fractions import Fraction

import pytest

from _gen import SQUARES_PENCIL, rand_tuple
from freeloci.cpoly import CPoly, SizeCapError, det_cpoly, det_generic, generic_variables
from freeloci.linalg import QMatrix
from freeloci.pencil import MonicPencil


def test_arithmetic_and_evaluate():
    x, y = CPoly.var(["x", "y"], 0), CPoly.var(["x", "y"], 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.evaluate([3, 1]) == 8
    assert p.degree() == 2


def test_det_cpoly_matches_numeric_det():
    rng = random.Random(3)
    names = ["a", "b"]
    a, b = CPoly.var(names, 0), CPoly.var(names, 1)
    M = [[a + 1, b, a * b], [b, a, CPoly.const(names, 2)], [a - b, CPoly.const(names, 1), b * b]]
    D = det_cpoly(M)
    for _ in range(10):
        v = [Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5))]
        num = QMatrix([[e.evaluate(v) for e in row] for row in M]).det()
        assert D.evaluate(v) == num


@pytest.mark.parametrize("n", [1, 2])
def test_det_generic_agrees_with_evaluation(n):
    rng = random.Random(n)
    D = det_generic(SQUARES_PENCIL, n)
    names = generic_variables(2, n)
    assert len(D.variables) == len(names)
    for _ in range(5):
        X = rand_tuple(rng, 2, n)
        vals = [X[j][i, k] for j in range(2) for i in range(n) for k in range(n)]
        assert D.evaluate(vals) == SQUARES_PENCIL.det_at(X)


def test_generic_constant_term_is_one():
    D = det_generic(SQUARES_PENCIL, 2)
    assert D.evaluate([0] * len(D.variables)) == 1


def test_size_cap():
    with pytest.raises(SizeCapError):
        det_generic(SQUARES_PENCIL, 5, cap=12)


def test_json_has_text():
    D = det_generic(MonicPencil([[[1]]]), 1)
    js = D.to_json()
    assert js["degree"] == 1 and js["n_terms"] == 2
