"""Linear assignment, rounding procedures, and a brute-force QAP oracle."""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import InvalidInput
from .validation import check_permutation, check_square

BRUTE_FORCE_MAX_N = 10


@dataclass(frozen=True)
class AssignmentResult:
    permutation: np.ndarray
    value: float


def hungarian_max(W):
    """Permutation maximizing ``sum_i W[i, perm[i]]`` (exact optimum).

    Backed by scipy's O(n^3) Jonker-Volgenant-style solver; ties resolve
    deterministically (all-ones input returns the identity).
    """
    W = check_square(W, "W")
    rows, cols = linear_sum_assignment(W, maximize=True)
    perm = cols.astype(np.intp)
    value = float(W[rows, cols].sum())
    return AssignmentResult(permutation=perm, value=value)


def hungarian_min(W):
    """Permutation minimizing the assigned weight (negated maximization)."""
    res = hungarian_max(-np.asarray(W, dtype=np.float64))
    return AssignmentResult(permutation=res.permutation, value=-res.value)


def greedy_round(X):
    """Row-wise argmax mapping; ties break to the lowest column index.

    The output may repeat columns: it is a mapping, not necessarily a
    permutation.
    """
    X = check_square(X, "X")
    return np.argmax(X, axis=1).astype(np.intp)


def hungarian_round(X):
    """Project onto permutations by maximizing ``<X, P>``."""
    return hungarian_max(X).permutation


def overlap_fraction(pi_hat, pi_star):
    """Fraction of indices where the mapping agrees with the planted
    permutation."""
    pi_hat = np.asarray(pi_hat)
    pi_star = check_permutation(pi_star, name="pi_star")
    if pi_hat.shape != pi_star.shape:
        raise InvalidInput("pi_hat and pi_star must have equal length")
    return float(np.mean(pi_hat == pi_star))


def qap_value(A, B, perm):
    """QAP objective ``||A P - P B||_F^2`` of a permutation.

    Uses the orthogonal-invariance identity ``||A P - P B||_F =
    ||A - P B P^T||_F`` with ``(P B P^T)[i, j] = B[perm[i], perm[j]]``.
    """
    perm = check_permutation(perm, n=A.shape[0])
    diff = A - B[np.ix_(perm, perm)]
    return float(np.sum(diff * diff))


def brute_force_qap(A, B):
    """Exhaustive QAP minimizer over all n! permutations (n <= 10).

    Returns the lexicographically smallest optimal permutation and its
    objective value.
    """
    A = check_square(A, "A")
    B = check_square(B, "B")
    n = A.shape[0]
    if B.shape[0] != n:
        raise InvalidInput("A and B must share dimensions")
    if n > BRUTE_FORCE_MAX_N:
        raise InvalidInput(f"brute force is guarded to n <= {BRUTE_FORCE_MAX_N}")
    best_perm = None
    best_val = np.inf
    for perm in itertools.permutations(range(n)):
        val = qap_value(A, B, np.array(perm, dtype=np.intp))
        if val < best_val:  # strict: keeps the lexicographically first optimum
            best_val = val
            best_perm = perm
    return np.array(best_perm, dtype=np.intp), best_val
