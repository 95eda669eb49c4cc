"""Seeded generation of GOE matrices and correlated Gaussian Wigner pairs.

The planted model draws two GOE matrices A and Z and a permutation pi, and
sets ``B = P^T (A + sigma * Z) P`` where ``P[i, j] = 1{j = pi[i]}``. With the
identity plant this reduces to ``B = A + sigma * Z``.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput
from .validation import check_permutation

SIGMA_DECIMALS = 9  # sigma is quantized to this precision when deriving seeds


def make_rng(seed):
    """PCG64 generator with explicit seeding (reproducible across platforms)."""
    return np.random.default_rng(seed)


def derive_seed(base_seed, n, sigma, rep):
    """Stable per-trial seed from (base_seed, n, sigma, repetition).

    Trials seeded this way are independent of execution order, so parallel
    and serial sweeps produce identical results.
    """
    sigma_key = int(round(float(sigma) * 10**SIGMA_DECIMALS))
    ss = np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=(int(n), sigma_key, int(rep))
    )
    return int(ss.generate_state(2, dtype=np.uint64)[0])


def sample_permutation(n, rng):
    """Uniform random permutation of {0, .., n-1} (Fisher-Yates)."""
    if n < 1:
        raise InvalidInput("n must be >= 1")
    return rng.permutation(n).astype(np.intp)


def perm_to_matrix(perm):
    """Matrix form ``P[i, j] = 1{j = perm[i]}`` of a permutation."""
    perm = check_permutation(perm)
    n = perm.shape[0]
    P = np.zeros((n, n))
    P[np.arange(n), perm] = 1.0
    return P


def invert_permutation(perm):
    perm = check_permutation(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.shape[0])
    return inv


def sample_goe(n, rng):
    """Draw an n x n GOE matrix.

    Diagonal entries are N(0, 2/n), off-diagonal N(0, 1/n), independent on
    and above the diagonal; the result is exactly symmetric.
    """
    if n < 1:
        raise InvalidInput("n must be >= 1")
    A = np.zeros((n, n))
    A[np.diag_indices(n)] = rng.normal(0.0, np.sqrt(2.0 / n), size=n)
    iu = np.triu_indices(n, k=1)
    off = rng.normal(0.0, np.sqrt(1.0 / n), size=iu[0].shape[0])
    A[iu] = off
    A.T[iu] = off
    return A


@dataclass(frozen=True)
class WignerPair:
    """A correlated pair (A, B) with the planted alignment and retained noise."""

    n: int
    sigma: float
    a: np.ndarray
    b: np.ndarray
    z: np.ndarray  # noise draw, retained for diagnostics
    pi_star: np.ndarray
    seed: int

    @property
    def planted_matrix(self):
        return perm_to_matrix(self.pi_star)


def sample_wigner_pair(n, sigma, rng, plant="identity", seed=None):
    """Draw a Gaussian Wigner pair with noise level sigma.

    Parameters
    ----------
    plant : {"identity", "uniform"}
        Identity keeps ``B = A + sigma * Z``; "uniform" conjugates by a
        uniformly random planted permutation.
    seed : int, optional
        Recorded on the pair for bookkeeping only; pass the seed used to
        build ``rng``.
    """
    if sigma < 0:
        raise InvalidInput("sigma must be >= 0")
    if plant not in ("identity", "uniform"):
        raise InvalidInput(f"unknown plant {plant!r}")
    A = sample_goe(n, rng)
    Z = sample_goe(n, rng)
    C = A + sigma * Z
    if plant == "identity":
        pi = np.arange(n, dtype=np.intp)
        B = C
    else:
        pi = sample_permutation(n, rng)
        # B[pi[i], pi[j]] = C[i, j] is exact index shuffling, so the
        # construction identity B = P^T C P holds to the bit.
        B = np.empty_like(C)
        B[np.ix_(pi, pi)] = C
    return WignerPair(
        n=n, sigma=float(sigma), a=A, b=B, z=Z, pi_star=pi,
        seed=-1 if seed is None else int(seed),
    )


def dump_pair(pair, path):
    """Serialize a pair to the plain text interchange format.

    First line: ``n sigma seed``; then n rows of A, n rows of B, and the
    planted permutation as n integers on one line.
    """
    with open(path, "w") as fh:
        fh.write(f"{pair.n} {pair.sigma!r} {pair.seed}\n")
        for M in (pair.a, pair.b):
            for row in M:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")
        fh.write(" ".join(str(int(v)) for v in pair.pi_star) + "\n")


def load_pair(path):
    """Inverse of :func:`dump_pair` (noise matrix is not serialized)."""
    with open(path) as fh:
        first = fh.readline().split()
        n, sigma, seed = int(first[0]), float(first[1]), int(first[2])
        rows = [
            np.array(fh.readline().split(), dtype=np.float64) for _ in range(2 * n)
        ]
        pi = np.array([int(v) for v in fh.readline().split()], dtype=np.intp)
    A = np.vstack(rows[:n])
    B = np.vstack(rows[n:])
    return WignerPair(
        n=n, sigma=sigma, a=A, b=B, z=np.full((n, n), np.nan),
        pi_star=pi, seed=seed,
    )
