"""Dense symmetric matrix arithmetic and eigendecomposition."""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput, NumericalFailure
from .validation import as_matrix, check_square, check_symmetric

#: Orthonormality tolerance for ``V^T V - I`` in max norm.
ORTHO_TOL = 1e-10
#: Relative reconstruction tolerance ``||A - V diag(w) V^T||_F <= RECON_TOL * ||A||_F``.
RECON_TOL = 1e-8


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
    symmetric matrix."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def n(self):
        return self.values.shape[0]

    def reconstruct(self):
        """Return ``V diag(values) V^T``."""
        return (self.vectors * self.values) @ self.vectors.T


def _fix_signs(vectors):
    """Flip eigenvector signs so the largest-magnitude entry is positive.

    Ties break toward the lowest row index (argmax semantics), making the
    decomposition reproducible across runs.
    """
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eigen(A):
    """Eigendecomposition of a symmetric matrix with a fixed sign convention.

    Parameters
    ----------
    A : (n, n) array
        Exactly symmetric with finite entries.

    Returns
    -------
    EigenDecomposition
        Ascending eigenvalues; unit eigenvectors as columns, each with its
        largest-magnitude entry positive.
    """
    A = check_symmetric(A)
    try:
        values, vectors = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    return EigenDecomposition(values=values, vectors=_fix_signs(vectors))


def frob_norm(A):
    """Frobenius norm of a matrix."""
    A = as_matrix(A)
    return float(np.linalg.norm(A, "fro"))


def commutator_residual(A, X, B):
    """Return ``A X - X B`` for conforming dense matrices."""
    A = check_square(A, "A")
    X = as_matrix(X, "X")
    B = check_square(B, "B")
    if A.shape[1] != X.shape[0] or X.shape[1] != B.shape[0]:
        raise InvalidInput(
            f"dimension mismatch: A {A.shape}, X {X.shape}, B {B.shape}"
        )
    return A @ X - X @ B
