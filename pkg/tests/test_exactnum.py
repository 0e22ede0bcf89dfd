from fractions import Fraction

import pytest

import oracles
from artifact.exactnum import (
    IntMatrix,
    ShapeError,
    SingularMatrix,
    charpoly,
    hnf,
    integer_kernel,
    invariant_factors,
    rank,
    rational_inverse,
    snf,
    solve_exact,
    vector_gcd,
)


def test_random_matrices_against_brute_force():
    n, fails = oracles.exactnum_suite(220)
    assert n >= 200
    assert fails == []


def test_hnf_small():
    h, u = hnf([[2, 4], [1, 3]])
    assert h.tolist() == [[1, 1], [0, 2]]
    assert u @ IntMatrix([[2, 4], [1, 3]]) == h


def test_hnf_is_canonical_under_row_operations():
    m = IntMatrix([[3, 1, 4], [1, 5, 9], [2, 6, 5]])
    u = IntMatrix([[1, 2, 0], [0, 1, 0], [3, 7, 1]])
    assert hnf(m)[0] == hnf(u @ m)[0]


def test_snf_examples():
    d, _, _ = snf(IntMatrix.diag([2, 3]))
    assert d.tolist() == [[1, 0], [0, 6]]
    assert invariant_factors([[0, -1], [-1, 0]]) == (1, 1)
    assert invariant_factors([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == (2, 6, 12)


def test_kernel():
    assert integer_kernel([[1, 2]]).tolist() == [[2, -1]]
    assert integer_kernel([[2, 4]]).tolist() == [[2, -1]]
    assert integer_kernel([[1, 0], [0, 1]]).rows == 0
    assert integer_kernel([[1, 0], [0, 1]]).cols == 2


def test_solve_exact_divisor_systems():
    assert solve_exact([[-5, 0], [-5, 1]], [20, 72]) == (-4, 52)
    assert solve_exact([[-10, 0], [-8, 1]], [20, 38]) == (-2, 22)
    assert solve_exact([[2, 0], [0, 3]], [1, 1]) == (Fraction(1, 2), Fraction(1, 3))
    with pytest.raises(SingularMatrix):
        solve_exact([[1, 2], [2, 4]], [1, 1])


def test_rational_inverse():
    inv = rational_inverse([[2, 1], [1, 1]])
    assert inv == [[1, -1], [-1, 2]]
    with pytest.raises(SingularMatrix):
        rational_inverse([[1, 1], [1, 1]])


def test_charpoly_and_rank():
    assert charpoly([[0, 1], [1, 0]]) == [-1, 0, 1]
    assert charpoly(IntMatrix.identity(3)) == [-1, 3, -3, 1]
    assert rank([[1, 2], [2, 4]]) == 1
    assert vector_gcd([12, -18, 30]) == 6
    assert vector_gcd([]) == 0


def test_shape_errors():
    with pytest.raises(ShapeError):
        IntMatrix([[1, 2], [3]])
    with pytest.raises(ShapeError):
        IntMatrix([[1, 2]]) @ IntMatrix([[1, 2]])
    assert IntMatrix([], cols=3).T.rows == 3
