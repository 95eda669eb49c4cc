"""Convex relaxation solvers for the graph alignment QAP.

Three relaxations of ``min_P ||AP - PB||_F^2`` are implemented:

* Birkhoff: minimize over doubly stochastic matrices, via fully corrective
  Frank-Wolfe with the linear assignment problem as linear minimization
  oracle.
* Simplex: minimize over ``{X >= 0, sum(X) = n}``, via monotone accelerated
  projected gradient; the single-entry linear minimization oracle supplies
  the duality-gap stopping certificate.
* Regularized spectral (GRAMPA-style): minimize
  ``||AX - XB||_F^2 + eta ||X||_F^2`` subject to ``1^T X 1 = n``, in closed
  form in the eigenbases of A and B.
"""

import time
from dataclasses import dataclass

import numpy as np

from .assignment import hungarian_max, hungarian_min
from .exceptions import InvalidInput, NumericalFailure
from .linalg import sym_eigen
from .models import invert_permutation
from .validation import as_matrix, check_same_dim, check_symmetric

DEFAULT_TOL_GAP = 1e-6
DEFAULT_ETA = 0.2
BIRKHOFF_ITER_FACTOR = 20  # default max_iters = factor * n
SIMPLEX_ITER_FACTOR = 50
_RESIDUAL_REFRESH = 64  # recompute R from scratch this often to bound drift


@dataclass(frozen=True)
class SolverReport:
    """Outcome of a single solve call."""

    x: np.ndarray
    objective: float
    fw_gap: float
    iterations: int
    converged: bool
    wall_time_seconds: float


@dataclass(frozen=True)
class GrampaCoefficients:
    """Eigenbasis coefficients of the regularized spectral solution."""

    eta: float
    xhat: np.ndarray
    scale: float


def objective(A, X, B):
    """Relaxation objective ``||AX - XB||_F^2``."""
    A = as_matrix(A, "A")
    X = as_matrix(X, "X")
    B = as_matrix(B, "B")
    if A.shape[1] != X.shape[0] or X.shape[1] != B.shape[0]:
        raise InvalidInput("dimension mismatch in objective")
    R = A @ X - X @ B
    return float(np.sum(R * R))


def gradient(A, X, B):
    """Analytic gradient ``2 (A R - R B)`` with ``R = AX - XB``.

    Valid for symmetric A and B only; asymmetric inputs are rejected.
    """
    A = check_symmetric(A, "A")
    B = check_symmetric(B, "B")
    X = as_matrix(X, "X")
    if A.shape[1] != X.shape[0] or X.shape[1] != B.shape[0]:
        raise InvalidInput("dimension mismatch in gradient")
    R = A @ X - X @ B
    return 2.0 * (A @ R - R @ B)


def _barycenter(n):
    return np.full((n, n), 1.0 / n)


def _birkhoff_oracle(A, B, grad):
    """LMO over the Birkhoff polytope: min-cost assignment on the gradient.

    Returns the vertex X_v (as a permutation), plus ``A X_v - X_v B``
    assembled in O(n^2) by permuting rows/columns.
    """
    perm = hungarian_min(grad).permutation
    inv = invert_permutation(perm)
    vertex_residual = A[:, inv] - B[perm, :]
    vertex = np.zeros_like(grad)
    vertex[np.arange(grad.shape[0]), perm] = 1.0
    return vertex, vertex_residual


def _frank_wolfe(A, B, oracle, init, tol_gap, max_iters):
    """Plain Frank-Wolfe with exact line search and a duality-gap stop.

    The gap ``<grad, X - vertex>`` certifies suboptimality of the current
    iterate; we stop once it drops below ``tol_gap * max(1, objective)``.
    """
    start = time.perf_counter()
    X = init.copy()
    R = A @ X - X @ B
    gap = np.inf
    fval = float(np.sum(R * R))
    iters = 0
    converged = False
    for k in range(max_iters + 1):
        grad = 2.0 * (A @ R - R @ B)
        vertex, vertex_residual = oracle(A, B, grad)
        D = vertex - X
        gap = float(-np.sum(grad * D))
        fval = float(np.sum(R * R))
        if gap <= tol_gap * max(1.0, fval):
            converged = True
            break
        if k == max_iters:
            break
        S = vertex_residual - R
        ss = float(np.sum(S * S))
        if ss <= 0.0:
            # degenerate direction: the objective is flat along it
            converged = gap <= tol_gap * max(1.0, fval)
            break
        gamma = min(1.0, max(0.0, -float(np.sum(R * S)) / ss))
        if gamma == 0.0:
            break
        X += gamma * D
        R += gamma * S
        iters = k + 1
        if iters % _RESIDUAL_REFRESH == 0:
            R = A @ X - X @ B
    wall = time.perf_counter() - start
    R = A @ X - X @ B
    fval = float(np.sum(R * R))
    return SolverReport(
        x=X, objective=fval, fw_gap=gap, iterations=iters,
        converged=converged, wall_time_seconds=wall,
    )


def _prep_pair(A, B):
    A = check_symmetric(A, "A")
    B = check_symmetric(B, "B")
    check_same_dim(A, B)
    return A, B


def _project_simplex(v):
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    k = np.arange(1, v.shape[0] + 1)
    rho = np.nonzero(u * k > css - 1.0)[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _reoptimize_weights(G, w0, iters):
    """Approximately minimize ``0.5 w^T G w`` over the simplex.

    Warm-started accelerated projected gradient; the caller keeps the
    better of the result and the warm start, so the overall solve stays
    monotone even when this cuts out early.
    """
    L = np.abs(G).sum(axis=1).max() + 1e-12  # row-sum bound on ||G||_2
    w = w0.copy()
    y = w0.copy()
    t = 1.0
    for _ in range(iters):
        w_new = _project_simplex(y - (G @ y) / L)
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = w_new + ((t - 1.0) / t_new) * (w_new - w)
        w, t = w_new, t_new
    return w


class _VertexSet:
    """Active permutation vertices of a corrective Frank-Wolfe run.

    Holds the permutations, their inverses, and the Gram matrix of vertex
    residuals ``r_P = A P - P B``. Gram entries reduce to O(n) index sums:
    with ``C = A^2``, ``tr(P^T C Q) = sum_i C[i, q^{-1}(p(i))]``, and both
    cross terms equal ``tr(P^T A Q B)`` by trace cyclicity, so only the
    newest vertex's product ``A Q B = A @ B[q, :]`` is ever materialized.
    """

    def __init__(self, A, B):
        self.A = A
        self.B = B
        self.A2 = A @ A
        self.B2 = B @ B
        self.tr_diag = float(np.trace(self.A2) + np.trace(self.B2))
        n = A.shape[0]
        self.idx = np.arange(n)
        self.perms = np.zeros((0, n), dtype=np.intp)
        self.invs = np.zeros((0, n), dtype=np.intp)
        self.gram = np.zeros((0, 0))

    @property
    def size(self):
        return self.perms.shape[0]

    def seed_cyclic(self):
        """Seed with the n cyclic shifts, whose uniform average is J/n.

        The full shift-pair Gram block is a 2-D circular cross-correlation
        of A and B, computed at once with FFTs.
        """
        n = self.A.shape[0]
        shifts = np.mod(self.idx[None, :] + self.idx[:, None], n)
        self.perms = shifts.astype(np.intp)
        self.invs = np.mod(self.idx[None, :] - self.idx[:, None], n).astype(np.intp)
        d1 = np.array([self.A2[self.idx, row].sum() for row in shifts])
        d2 = np.array([self.B2[self.idx, row].sum() for row in shifts])
        fa = np.fft.fft2(self.A)
        fb = np.fft.fft2(self.B)
        t3 = np.real(np.fft.ifft2(np.conj(fa) * fb))
        diff = np.mod(self.idx[:, None] - self.idx[None, :], n)
        self.gram = d1[diff] + d2[diff] - 2.0 * t3
        return np.full(n, 1.0 / n)

    def add(self, perm):
        """Append a vertex, extending the Gram matrix by one row/column."""
        inv = np.empty_like(perm)
        inv[perm] = self.idx
        m = self.size
        row = np.empty(m + 1)
        if m:
            apb = self.A @ self.B[perm, :]  # A P B for the new vertex
            t1 = self.A2[self.idx[None, :], self.invs[:, perm]].sum(axis=1)
            t2 = self.B2[self.perms, perm[None, :]].sum(axis=1)
            t3 = apb[self.idx[None, :], self.perms].sum(axis=1)
            row[:m] = t1 + t2 - 2.0 * t3
            diag_cross = float(apb[self.idx, perm].sum())
        else:
            diag_cross = float((self.A @ self.B[perm, :])[self.idx, perm].sum())
        row[m] = self.tr_diag - 2.0 * diag_cross
        gram = np.empty((m + 1, m + 1))
        gram[:m, :m] = self.gram
        gram[m, :] = row
        gram[:, m] = row
        self.gram = gram
        self.perms = np.vstack([self.perms, perm[None, :]])
        self.invs = np.vstack([self.invs, inv[None, :]])

    def combination(self, w):
        """Dense ``X = sum_k w_k P_k``."""
        n = self.A.shape[0]
        X = np.zeros((n, n))
        for perm, wk in zip(self.perms, w):
            X[self.idx, perm] += wk
        return X


_FC_QP_ITERS = 100
_POLISH_ROWS = 32
_POLISH_SWAPS = 8


def _polish_permutation(A, B, perm, confidence):
    """Greedy 2-swap improvement of a rounded permutation.

    The QAP objective ``||A - P^T B P||_F^2`` decreases iff the congruence
    ``c(P) = sum_{u,v} A[u,v] B[p(u), p(v)]`` increases. Only swaps among
    the lowest-confidence rows are scanned; a near-exact rounding has its
    few errors exactly there.
    """
    n = perm.shape[0]
    rows = np.argsort(confidence)[: min(_POLISH_ROWS, n)]
    perm = perm.copy()
    for _ in range(_POLISH_SWAPS):
        best_gain = 1e-10
        best = None
        M = B[np.ix_(perm, perm)]
        for a_pos in range(rows.shape[0]):
            i = int(rows[a_pos])
            for j in rows[a_pos + 1:]:
                j = int(j)
                # swap delta of c(P): 2 S over all v, minus the v in {i, j}
                # row terms (the 2x2 block swaps differently), plus the
                # exact block delta
                s = float((A[i] - A[j]) @ (M[j] - M[i]))
                s -= (A[i, i] - A[i, j]) * (M[i, j] - M[i, i])
                s -= (A[i, j] - A[j, j]) * (M[j, j] - M[i, j])
                gain = 2.0 * s + (A[i, i] - A[j, j]) * (M[j, j] - M[i, i])
                if gain > best_gain:
                    best_gain = gain
                    best = (i, j)
        if best is None:
            break
        i, j = best
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def solve_birkhoff(A, B, tol_gap=DEFAULT_TOL_GAP, max_iters=None, init=None,
                   corrective=True):
    """Frank-Wolfe over the Birkhoff polytope with a Hungarian oracle.

    The default path is fully corrective: the iterate is an explicit convex
    combination of permutation matrices (seeded with the cyclic-shift
    decomposition of the barycenter J/n) and the weights are re-optimized
    over the active set after every oracle call. This converges far faster
    than plain Frank-Wolfe here, whose iterates cannot cheaply represent
    the diffuse near-barycenter component of the optimum. Each step also
    offers the Hungarian rounding of the current iterate to the active set;
    near-optimal solutions concentrate on one permutation plus a diffuse
    remainder, and the rounding recovers that permutation long before the
    gradient oracle does. The duality-gap certificate and stopping rule
    are the standard Frank-Wolfe ones.

    ``converged`` is False (not an error) when the iteration cap is hit
    first. Passing an explicit ``init`` matrix falls back to plain
    Frank-Wolfe, since an arbitrary feasible point has no vertex
    decomposition at hand.
    """
    A, B = _prep_pair(A, B)
    n = A.shape[0]
    if max_iters is None:
        max_iters = BIRKHOFF_ITER_FACTOR * n
    if init is not None or not corrective:
        X0 = _barycenter(n) if init is None else as_matrix(init, "init")
        return _frank_wolfe(A, B, _birkhoff_oracle, X0, tol_gap, max_iters)

    start = time.perf_counter()
    vertices = _VertexSet(A, B)
    w = vertices.seed_cyclic()
    seen = {perm.tobytes() for perm in vertices.perms}
    X = vertices.combination(w)
    R = A @ X - X @ B
    gap = np.inf
    fval = float(np.sum(R * R))
    iters = 0
    converged = False
    for k in range(max_iters + 1):
        grad = 2.0 * (A @ R - R @ B)
        perm = hungarian_min(grad).permutation
        fval = float(np.sum(R * R))
        gap = float(np.sum(grad * X) - grad[vertices.idx, perm].sum())
        if gap <= tol_gap * max(1.0, fval):
            converged = True
            break
        if k == max_iters:
            break
        fresh = 0
        rounded = hungarian_max(X).permutation
        polished = _polish_permutation(
            A, B, rounded, X[vertices.idx, rounded],
        )
        for cand in (perm, rounded, polished):
            key = cand.tobytes()
            if key not in seen:
                seen.add(key)
                vertices.add(cand)
                fresh += 1
        if fresh:
            w = np.append(w, np.zeros(fresh))
        w_new = _reoptimize_weights(vertices.gram, w, _FC_QP_ITERS)
        if w_new @ vertices.gram @ w_new <= w @ vertices.gram @ w:
            w = w_new
        X = vertices.combination(w)
        R = A @ X - X @ B
        iters = k + 1
    wall = time.perf_counter() - start
    return SolverReport(
        x=X, objective=fval, fw_gap=gap, iterations=iters,
        converged=converged, wall_time_seconds=wall,
    )


def solve_simplex(A, B, tol_gap=DEFAULT_TOL_GAP, max_iters=None, init=None):
    """Minimize over the scaled simplex ``{X >= 0, sum(X) = n}``.

    The feasible set is a simplex over flattened matrices, so projection
    onto it is a sort; we run monotone accelerated projected gradient
    (FISTA with a best-iterate guard) and stop on the same Frank-Wolfe
    duality-gap certificate as the Birkhoff solver, computed from the
    single-entry linear minimization oracle. This reaches certified
    optima where plain Frank-Wolfe stalls for hundreds of iterations on
    the diffuse component of the solution.
    """
    A, B = _prep_pair(A, B)
    n = A.shape[0]
    if max_iters is None:
        max_iters = SIMPLEX_ITER_FACTOR * n
    X0 = _barycenter(n) if init is None else as_matrix(init, "init")

    start = time.perf_counter()
    # smoothness constant of ||AX - XB||_F^2: L = 2 (||A|| + ||B||)^2
    norm_a = float(np.abs(np.linalg.eigvalsh(A)).max())
    norm_b = float(np.abs(np.linalg.eigvalsh(B)).max())
    lip = 2.0 * (norm_a + norm_b) ** 2 + 1e-12
    scale = float(n)

    def project(M):
        flat = _project_simplex(M.ravel() / scale)
        return scale * flat.reshape(n, n)

    X = X0.copy()
    Y = X0.copy()
    t = 1.0
    R = A @ X - X @ B
    fval = float(np.sum(R * R))
    gap = np.inf
    iters = 0
    converged = False
    for k in range(max_iters + 1):
        grad = 2.0 * (A @ R - R @ B)
        gap = float(np.sum(grad * X)) - scale * float(grad.min())
        if gap <= tol_gap * max(1.0, fval):
            converged = True
            break
        if k == max_iters:
            break
        grad_y = grad
        if not np.array_equal(Y, X):
            RY = A @ Y - Y @ B
            grad_y = 2.0 * (A @ RY - RY @ B)
        Z = project(Y - grad_y / lip)
        RZ = A @ Z - Z @ B
        fz = float(np.sum(RZ * RZ))
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        if fz <= fval:  # monotone FISTA: keep the best iterate
            Y = Z + ((t - 1.0) / t_new) * (Z - X)
            X, R, fval = Z, RZ, fz
        else:
            Y = X + (t / t_new) * (Z - X)
        t = t_new
        iters = k + 1
    wall = time.perf_counter() - start
    return SolverReport(
        x=X, objective=fval, fw_gap=gap, iterations=iters,
        converged=converged, wall_time_seconds=wall,
    )


def grampa_coefficients(A, B, eta=DEFAULT_ETA):
    """Closed-form eigenbasis coefficients of the regularized relaxation.

    Stationarity of the Lagrangian of ``||AX - XB||_F^2 + eta ||X||_F^2``
    subject to ``1^T X 1 = n`` reads, in the eigenbases ``A = U L U^T`` and
    ``B = V M V^T`` with ``a = U^T 1`` and ``b = V^T 1``:

        2 ((l_i - m_j)^2 + eta) xhat_ij = nu * a_i * b_j,

    so ``xhat_ij = t * a_i b_j / ((l_i - m_j)^2 + eta)`` with the scale t
    fixed by the mass constraint. The denominator is bounded below by
    eta > 0, so coinciding eigenvalues need no special-casing.
    """
    if eta <= 0:
        raise InvalidInput("eta must be > 0")
    A, B = _prep_pair(A, B)
    eig_a = sym_eigen(A)
    eig_b = sym_eigen(B)
    a = eig_a.vectors.T.sum(axis=1)  # u_i . 1
    b = eig_b.vectors.T.sum(axis=1)
    denom = (eig_a.values[:, None] - eig_b.values[None, :]) ** 2 + eta
    K = np.outer(a, b) / denom
    mass = float(np.einsum("i,ij,j->", a, K, b))
    n = A.shape[0]
    if abs(mass) < 1e-14:
        raise NumericalFailure("degenerate normalizer in spectral solve")
    t = n / mass
    return GrampaCoefficients(eta=float(eta), xhat=t * K, scale=t), eig_a, eig_b


def solve_grampa(A, B, eta=DEFAULT_ETA):
    """Closed-form solve of the regularized spectral relaxation."""
    start = time.perf_counter()
    coeffs, eig_a, eig_b = grampa_coefficients(A, B, eta)
    X = eig_a.vectors @ coeffs.xhat @ eig_b.vectors.T
    R = A @ X - X @ B
    fval = float(np.sum(R * R)) + float(eta) * float(np.sum(X * X))
    wall = time.perf_counter() - start
    return SolverReport(
        x=X, objective=fval, fw_gap=0.0, iterations=0,
        converged=True, wall_time_seconds=wall,
    )


def population_mixing(n, sigma):
    """Mixing weight of the population-level optimum."""
    if n < 1:
        raise InvalidInput("n must be >= 1")
    if sigma < 0:
        raise InvalidInput("sigma must be >= 0")
    return 2.0 / (2.0 + sigma * sigma * (n + 1))


def population_optimum(n, sigma):
    """Expected-objective minimizer: a convex mix of I and the barycenter."""
    eps = population_mixing(n, sigma)
    return eps * np.eye(n) + (1.0 - eps) / n * np.ones((n, n))


def population_distance(n, sigma):
    """Frobenius distance ``||I - X||_F`` of the population optimum from
    the identity: ``(1 - eps) * sqrt(n - 1)``."""
    eps = population_mixing(n, sigma)
    return float((1.0 - eps) * np.sqrt(n - 1))


def population_objective(X, n, sigma):
    """Population-level objective (identity plant):
    ``(2 + sigma^2)(n + 1) ||X||_F^2 - 2 Tr(X)^2 - 2 <X, X^T>``."""
    X = as_matrix(X, "X")
    tr = float(np.trace(X))
    return (
        (2.0 + sigma * sigma) * (n + 1) * float(np.sum(X * X))
        - 2.0 * tr * tr
        - 2.0 * float(np.sum(X * X.T))
    )
