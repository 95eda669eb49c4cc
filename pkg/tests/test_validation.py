import numpy as np
import pytest

from graphalign.exceptions import InvalidInput
from graphalign.validation import (
    as_matrix,
    check_doubly_stochastic,
    check_permutation,
    check_same_dim,
    check_square,
    check_symmetric,
)


def test_as_matrix_casts_to_float64():
    X = as_matrix([[1, 2], [3, 4]])
    assert X.dtype == np.float64
    assert X.shape == (2, 2)


def test_as_matrix_rejects_non_2d():
    with pytest.raises(InvalidInput):
        as_matrix(np.ones(3))
    with pytest.raises(InvalidInput):
        as_matrix(np.ones((2, 2, 2)))


def test_as_matrix_rejects_non_finite():
    with pytest.raises(InvalidInput):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(InvalidInput):
        as_matrix([[np.inf, 0.0], [0.0, 1.0]])


def test_check_square():
    with pytest.raises(InvalidInput):
        check_square(np.ones((2, 3)))
    assert check_square(np.ones((3, 3))).shape == (3, 3)


def test_check_symmetric_is_exact():
    A = np.array([[1.0, 2.0], [2.0, 1.0]])
    check_symmetric(A)
    A[0, 1] += 1e-15
    with pytest.raises(InvalidInput):
        check_symmetric(A)


def test_check_same_dim():
    check_same_dim(np.ones((2, 2)), np.zeros((2, 2)))
    with pytest.raises(InvalidInput):
        check_same_dim(np.ones((2, 2)), np.ones((3, 3)))


def test_check_doubly_stochastic_accepts_barycenter_and_permutation():
    n = 5
    check_doubly_stochastic(np.full((n, n), 1.0 / n))
    check_doubly_stochastic(np.eye(n))


def test_check_doubly_stochastic_tolerances():
    X = np.eye(3)
    X[0, 1] = -1e-10  # within neg_tol
    check_doubly_stochastic(X, sum_tol=1e-9)
    X[0, 1] = -1e-6
    with pytest.raises(InvalidInput):
        check_doubly_stochastic(X)
    Y = np.eye(3) * 1.01
    with pytest.raises(InvalidInput):
        check_doubly_stochastic(Y)


def test_check_permutation():
    p = check_permutation([2, 0, 1])
    assert p.dtype == np.intp
    with pytest.raises(InvalidInput):
        check_permutation([0, 0, 1])
    with pytest.raises(InvalidInput):
        check_permutation([[0, 1]])
    with pytest.raises(InvalidInput):
        check_permutation([0, 1], n=3)
