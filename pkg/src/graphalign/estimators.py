"""Estimator-style front end for the relaxation solvers.

Each aligner follows the scikit-learn protocol: hyperparameters in
``__init__`` (exposed through ``get_params`` / ``set_params``), a
``fit(A, B)`` that solves the relaxation and stores fitted attributes with
trailing underscores, and ``predict()`` returning the rounded vertex
correspondence.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import solvers
from .assignment import greedy_round, hungarian_round


class BaseAligner(BaseEstimator):
    """Common fit/predict machinery; subclasses implement ``_solve``."""

    def _solve(self, A, B):  # pragma: no cover - abstract
        raise NotImplementedError

    def fit(self, A, B):
        """Solve the relaxation for the adjacency pair (A, B)."""
        report = self._solve(A, B)
        self.X_ = report.x
        self.objective_ = report.objective
        self.fw_gap_ = report.fw_gap
        self.n_iter_ = report.iterations
        self.converged_ = report.converged
        self.report_ = report
        return self

    def predict(self, rounding="hungarian"):
        """Round the fitted relaxed solution to a vertex correspondence.

        ``hungarian`` returns a permutation; ``greedy`` a per-row argmax
        mapping that may repeat columns.
        """
        check_is_fitted(self, "X_")
        if rounding == "hungarian":
            return hungarian_round(self.X_)
        if rounding == "greedy":
            return greedy_round(self.X_)
        raise ValueError(f"unknown rounding {rounding!r}")

    def fit_predict(self, A, B, rounding="hungarian"):
        return self.fit(A, B).predict(rounding=rounding)

    def score(self, pi_star):
        """Fraction of vertices matched against a reference permutation."""
        from .assignment import overlap_fraction

        return overlap_fraction(self.predict(), np.asarray(pi_star))


class BirkhoffAligner(BaseAligner):
    """Frank-Wolfe solver over doubly stochastic matrices."""

    def __init__(self, tol_gap=solvers.DEFAULT_TOL_GAP, max_iters=None, init=None):
        self.tol_gap = tol_gap
        self.max_iters = max_iters
        self.init = init

    def _solve(self, A, B):
        return solvers.solve_birkhoff(
            A, B, tol_gap=self.tol_gap, max_iters=self.max_iters, init=self.init
        )


class SimplexAligner(BaseAligner):
    """Projected-gradient solver over the scaled simplex."""

    def __init__(self, tol_gap=solvers.DEFAULT_TOL_GAP, max_iters=None, init=None):
        self.tol_gap = tol_gap
        self.max_iters = max_iters
        self.init = init

    def _solve(self, A, B):
        return solvers.solve_simplex(
            A, B, tol_gap=self.tol_gap, max_iters=self.max_iters, init=self.init
        )


class SpectralAligner(BaseAligner):
    """Closed-form regularized spectral relaxation (GRAMPA-style)."""

    def __init__(self, eta=solvers.DEFAULT_ETA):
        self.eta = eta

    def _solve(self, A, B):
        return solvers.solve_grampa(A, B, eta=self.eta)


SOLVER_REGISTRY = {
    "birkhoff": BirkhoffAligner,
    "simplex": SimplexAligner,
    "grampa": SpectralAligner,
}
