"""Input validation helpers.

All solver- and certificate-facing entry points funnel their array inputs
through these checks so that contract violations surface as
:class:`~graphalign.exceptions.InvalidInput` rather than cryptic numpy errors.
"""

import numpy as np

from .exceptions import InvalidInput


def as_matrix(X, name="X"):
    """Return ``X`` as a float64 2-D array, checking finiteness."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise InvalidInput(f"{name} must be 2-D, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidInput(f"{name} contains non-finite entries")
    return X


def check_square(X, name="X"):
    X = as_matrix(X, name)
    if X.shape[0] != X.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {X.shape}")
    return X


def check_symmetric(X, name="A"):
    """Require an exactly symmetric square matrix (no symmetrization)."""
    X = check_square(X, name)
    if not np.array_equal(X, X.T):
        raise InvalidInput(f"{name} must be exactly symmetric")
    return X


def check_same_dim(A, B, name_a="A", name_b="B"):
    if A.shape != B.shape:
        raise InvalidInput(
            f"{name_a} and {name_b} must share dimensions, "
            f"got {A.shape} vs {B.shape}"
        )


def check_doubly_stochastic(X, name="X", neg_tol=1e-9, sum_tol=1e-8):
    """Require ``X`` to lie in the Birkhoff polytope up to tolerances."""
    X = check_square(X, name)
    if X.min() < -neg_tol:
        raise InvalidInput(f"{name} has entries below -{neg_tol}")
    rows = X.sum(axis=1)
    cols = X.sum(axis=0)
    if np.abs(rows - 1.0).max() > sum_tol or np.abs(cols - 1.0).max() > sum_tol:
        raise InvalidInput(f"{name} row/column sums deviate from 1 beyond {sum_tol}")
    return X


def check_permutation(perm, n=None, name="perm"):
    """Require ``perm`` to be a bijection on {0, .., len(perm)-1}."""
    perm = np.asarray(perm)
    if perm.ndim != 1:
        raise InvalidInput(f"{name} must be 1-D")
    if n is not None and perm.shape[0] != n:
        raise InvalidInput(f"{name} must have length {n}, got {perm.shape[0]}")
    m = perm.shape[0]
    if not np.array_equal(np.sort(perm), np.arange(m)):
        raise InvalidInput(f"{name} is not a permutation of 0..{m - 1}")
    return perm.astype(np.intp)
