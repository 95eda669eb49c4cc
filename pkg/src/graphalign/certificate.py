"""Dual-certificate construction and its numerical checks.

The certificate is built from the eigendecomposition of A alone. With
eigenvalues ``l_i`` and unit eigenvectors ``u_i``, let ``s_i = <u_i, 1>``
and split the indices by the threshold ``t = n^(-eps/16)`` into a large-
overlap set (``|s_i| >= t``) and its strict complement. The dual objects
are

* ``R = J - I`` (eigenbasis weights ``s_i s_j - 1{i=j}``),
* ``mu = sum_i w_i u_i`` with ``w_i = s_i + (C - 1)/s_i`` on the large set
  and ``w_i = s_i`` elsewhere, where ``C = 1 - n / #large``,
* ``mu_tilde = 0``,
* ``M = sum_{i != j} wt_ij / (l_i - l_j) u_i u_j^T`` with
  ``wt_ij = s_i s_j - s_i w_j``,
* residual ``D = R - (AM - MA) - 1 mu^T``, which equals
  ``-sum_small u_i u_i^T - C sum_large u_i u_i^T`` by exact algebra.

The probabilistic bound checks (off-diagonal mass, max commutator entry,
overlap counts, eigenvalue-separation sum) report pass flags; they hold
with high probability per draw, never deterministically.
"""

import math
from dataclasses import dataclass, fields

import numpy as np

from .exceptions import DegenerateCertificate, InvalidInput, NumericalFailure
from .linalg import EigenDecomposition, frob_norm
from .validation import as_matrix, check_doubly_stochastic, check_symmetric

DEFAULT_EPSILON = 0.5


@dataclass(frozen=True)
class CertificateBundle:
    epsilon: float
    R: np.ndarray
    mu: np.ndarray
    mu_tilde: np.ndarray
    C: float
    M: np.ndarray
    D: np.ndarray
    overlaps: np.ndarray  # s_i = <u_i, 1>
    w_i: np.ndarray
    w_tilde: np.ndarray
    threshold: float
    big_set_size: int
    identity_residual: float  # max |D_spectral - (R - (AM - MA) - 1 mu^T)|
    d_frob: float
    mu_dot_one: float


@dataclass(frozen=True)
class CertificateReport:
    """One row of the certificate verification CSV."""

    n: int
    epsilon: float
    seed: int
    d_frob: float
    d_frob_bound: float
    eigsep_sum: float
    eigsep_bound: float
    small_count: int
    small_bound: float
    identity_residual: float
    mu_dot_one: float
    claim5_value: float
    claim5_bound: float
    claim5_pass: bool
    claim6_max: float
    claim6_bound: float
    claim6_pass: bool
    claim7_pass: bool
    claim8_pass: bool
    lemma4_lhs: float
    lemma4_rhs: float
    lemma4_pass: bool
    lemma5_ratio: float
    lemma5_pass: bool

    @classmethod
    def csv_columns(cls):
        return [f.name for f in fields(cls)]

    def csv_row(self):
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool):
                out.append("1" if v else "0")
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out


def overlap_threshold(n, epsilon):
    return float(n ** (-epsilon / 16.0))


def _split_sets(eig, epsilon):
    s = eig.vectors.T.sum(axis=1)
    thr = overlap_threshold(eig.n, epsilon)
    big = np.abs(s) >= thr
    return s, thr, big


def build_certificate(eig: EigenDecomposition, epsilon=DEFAULT_EPSILON):
    """Assemble the dual certificate from an eigendecomposition of A.

    Raises
    ------
    NumericalFailure
        If two eigenvalues coincide exactly (measure zero for GOE draws).
    DegenerateCertificate
        If no eigenvector has overlap above the threshold.
    """
    if not (0 < epsilon <= 1):
        raise InvalidInput("epsilon must lie in (0, 1]")
    n = eig.n
    lam = eig.values
    U = eig.vectors
    s, thr, big = _split_sets(eig, epsilon)
    n_big = int(big.sum())
    if n_big == 0:
        raise DegenerateCertificate("no eigenvector overlap above threshold")

    gaps = lam[:, None] - lam[None, :]
    off = ~np.eye(n, dtype=bool)
    if np.any(gaps[off] == 0.0):
        raise NumericalFailure("exactly coinciding eigenvalues")

    C = 1.0 - n / n_big
    # the complement-set form of C must agree with the direct form
    C_alt = 1.0 - n / (n - int((~big).sum()))
    assert C == C_alt

    w = s.copy()
    w[big] += (C - 1.0) / s[big]
    mu = U @ w
    mu_tilde = np.zeros(n)

    w_tilde = np.outer(s, s) - np.outer(s, w)
    np.fill_diagonal(w_tilde, 0.0)
    ratio = np.zeros_like(w_tilde)
    ratio[off] = w_tilde[off] / gaps[off]
    M = U @ ratio @ U.T

    R = np.ones((n, n)) - np.eye(n)

    # spectral definition of the residual
    d_diag = np.where(big, -C, -1.0)
    D = (U * d_diag) @ U.T

    A = eig.reconstruct()
    D_from_identity = R - (A @ M - M @ A) - np.outer(np.ones(n), mu)
    identity_residual = float(np.abs(D - D_from_identity).max())

    return CertificateBundle(
        epsilon=float(epsilon), R=R, mu=mu, mu_tilde=mu_tilde, C=float(C),
        M=M, D=D, overlaps=s, w_i=w, w_tilde=w_tilde, threshold=thr,
        big_set_size=n_big, identity_residual=identity_residual,
        d_frob=frob_norm(D), mu_dot_one=float(abs(mu.sum())),
    )


def small_overlap_count(eig, epsilon):
    """#{i : |<u_i, 1>| <= n^(-eps/16)} (the complement of the large set)."""
    s, thr, big = _split_sets(eig, epsilon)
    return int((~big).sum())


def check_claim7(eig, epsilon):
    """Overlap count bound: small-set size <= 3 n^(1 - eps/16)."""
    count = small_overlap_count(eig, epsilon)
    bound = 3.0 * eig.n ** (1.0 - epsilon / 16.0)
    return count, bound, count <= bound


def eigsep_sum(values, epsilon):
    """Regularized inverse-gap sum over distinct index pairs."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    gaps = np.abs(values[:, None] - values[None, :]) + n ** (-1.0 - epsilon)
    inv2 = 1.0 / (gaps * gaps)
    np.fill_diagonal(inv2, 0.0)
    return float(inv2.sum())


def check_claim8(eig, epsilon):
    """Eigenvalue-separation bound: inverse-gap sum <= n^(3 + 3 eps/2)."""
    total = eigsep_sum(eig.values, epsilon)
    bound = float(eig.n) ** (3.0 + 1.5 * epsilon)
    return total, bound, total <= bound


def check_claim5(A, B, epsilon):
    """Barycenter objective bound: (1/n^2) ||AJ - JB||_F^2 <= 9 n^eps."""
    A = check_symmetric(A, "A")
    B = check_symmetric(B, "B")
    n = A.shape[0]
    ra = A.sum(axis=1)  # (A J) columns are the row sums of A
    cb = B.sum(axis=0)  # (J B) rows are the column sums of B
    value = float(
        (n * np.sum(ra * ra) + n * np.sum(cb * cb) - 2.0 * ra.sum() * cb.sum())
        / n**2
    )
    bound = 9.0 * n**epsilon
    return value, bound, value <= bound


def check_claim6(A, Z, epsilon):
    """Max off-diagonal commutator entry: |(AZ - ZA)_ij| <= 8 n^(eps/2 - 1/2)."""
    A = check_symmetric(A, "A")
    Z = check_symmetric(Z, "Z")
    n = A.shape[0]
    comm = np.abs(A @ Z - Z @ A)
    np.fill_diagonal(comm, 0.0)
    maxval = float(comm.max())
    bound = 8.0 * n ** (epsilon / 2.0 - 0.5)
    return maxval, bound, maxval <= bound


def lemma4_bound(X, A, epsilon):
    """Off-diagonal mass bound for a doubly stochastic X:

    ``sum_{i != j} X_ij <= 2 n^(3/2 + 7 eps/8) ||AX - XA||_F
    + 4 n^(1 - eps/32)``.
    """
    X = check_doubly_stochastic(X, "X")
    A = check_symmetric(A, "A")
    n = A.shape[0]
    lhs = float(X.sum() - np.trace(X))
    comm = A @ X - X @ A
    rhs = float(
        2.0 * n ** (1.5 + 7.0 * epsilon / 8.0) * math.sqrt(np.sum(comm * comm))
        + 4.0 * n ** (1.0 - epsilon / 32.0)
    )
    return lhs, rhs, lhs <= rhs


#: Expected regime for the lemma-5 ratio (the proof constant is 2 * c_tilde
#: with c_tilde the concentration constant of ||Z||_F^2 <= c_tilde^2 n).
LEMMA5_RATIO_CAP = 4.0


def lemma5_bound(A, B, X, sigma):
    """Commutator-norm diagnostic for a Birkhoff solution.

    Returns ``(lhs, ratio, sigma_was_zero)`` where ``lhs = ||AX - XA||_F``
    and ``ratio = lhs / (sigma sqrt(n))``; at sigma = 0 the ratio falls
    back to ``lhs / sqrt(n)`` with the flag set.
    """
    A = check_symmetric(A, "A")
    X = as_matrix(X, "X")
    n = A.shape[0]
    comm = A @ X - X @ A
    lhs = float(math.sqrt(np.sum(comm * comm)))
    if sigma == 0:
        return lhs, lhs / math.sqrt(n), True
    return lhs, lhs / (sigma * math.sqrt(n)), False
