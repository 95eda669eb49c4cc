import numpy as np
import pytest

from graphalign.assignment import brute_force_qap, hungarian_round, overlap_fraction
from graphalign.exceptions import InvalidInput, NumericalFailure
from graphalign.models import make_rng, sample_wigner_pair
from graphalign.solvers import (
    gradient,
    objective,
    population_distance,
    population_mixing,
    population_objective,
    population_optimum,
    solve_birkhoff,
    solve_grampa,
    solve_simplex,
)
from graphalign.validation import check_doubly_stochastic

from _oracles import grampa_dense_kkt, pgd_birkhoff, pgd_population


def _pair(n, sigma, seed, plant="uniform"):
    return sample_wigner_pair(n, sigma, make_rng(seed), plant=plant)


def test_objective_definition():
    pair = _pair(6, 0.2, 0)
    X = make_rng(1).random((6, 6))
    R = pair.a @ X - X @ pair.b
    assert objective(pair.a, X, pair.b) == pytest.approx(np.sum(R * R))


def test_gradient_finite_differences():
    pair = _pair(5, 0.3, 2)
    X = make_rng(3).random((5, 5))
    G = gradient(pair.a, X, pair.b)
    rng = make_rng(4)
    h = 1e-6
    for _ in range(10):
        D = rng.normal(size=(5, 5))
        fd = (
            objective(pair.a, X + h * D, pair.b)
            - objective(pair.a, X - h * D, pair.b)
        ) / (2 * h)
        assert fd == pytest.approx(float(np.sum(G * D)), rel=1e-5, abs=1e-6)


def test_gradient_rejects_asymmetric():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(InvalidInput):
        gradient(A, np.eye(2), np.eye(2))


def test_birkhoff_iterates_feasible():
    for seed in range(3):
        pair = _pair(15, 0.2, seed)
        rep = solve_birkhoff(pair.a, pair.b, max_iters=40)
        check_doubly_stochastic(rep.x)


def test_birkhoff_monotone_prefix():
    # deterministic solver: a longer run extends the same trajectory, so
    # the objective must be non-increasing in the iteration budget
    pair = _pair(12, 0.3, 5)
    objs = [
        solve_birkhoff(pair.a, pair.b, max_iters=k).objective
        for k in (5, 10, 20, 40, 80)
    ]
    assert all(a >= b - 1e-12 for a, b in zip(objs, objs[1:]))


def test_birkhoff_matches_projected_gradient_oracle():
    for seed in range(3):
        pair = _pair(6, 0.1, seed + 10)
        rep = solve_birkhoff(pair.a, pair.b)
        ref = pgd_birkhoff(pair.a, pair.b)
        f_ref = objective(pair.a, ref, pair.b)
        assert rep.objective <= f_ref + 1e-6
        # the duality gap certifies closeness to the common optimum
        assert f_ref - rep.objective <= max(rep.fw_gap, 1e-6) + 1e-6


def test_birkhoff_gap_certifies_suboptimality():
    # f(X) - f(optimum) <= gap, with PGD standing in for the optimum
    pair = _pair(6, 0.2, 30)
    rep = solve_birkhoff(pair.a, pair.b, max_iters=5)
    ref = pgd_birkhoff(pair.a, pair.b)
    assert rep.objective - objective(pair.a, ref, pair.b) <= rep.fw_gap + 1e-8


def test_birkhoff_zero_matrices_return_init():
    Z = np.zeros((6, 6))
    rep = solve_birkhoff(Z, Z)
    assert rep.fw_gap == 0.0
    assert rep.converged
    assert rep.iterations == 0
    assert np.array_equal(rep.x, np.full((6, 6), 1.0 / 6))


def test_birkhoff_custom_init_plain_path():
    pair = _pair(8, 0.1, 6)
    rep = solve_birkhoff(pair.a, pair.b, max_iters=50, init=np.eye(8))
    check_doubly_stochastic(rep.x)
    assert rep.objective <= objective(pair.a, np.eye(8), pair.b) + 1e-12


def test_birkhoff_sigma_zero_immediate_recovery():
    pair = _pair(40, 0.0, 7)
    rep = solve_birkhoff(pair.a, pair.b)
    assert rep.converged
    assert rep.objective <= 1e-12
    assert overlap_fraction(hungarian_round(rep.x), pair.pi_star) == 1.0


def test_birkhoff_below_qap_optimum():
    for seed in range(5):
        pair = _pair(6, 0.1, seed + 40)
        rep = solve_birkhoff(pair.a, pair.b)
        _, qap = brute_force_qap(pair.a, pair.b)
        assert rep.objective <= qap + 1e-6


def test_simplex_feasibility_and_gap():
    pair = _pair(12, 0.2, 8)
    rep = solve_simplex(pair.a, pair.b, max_iters=500)
    assert rep.x.min() >= -1e-12
    assert rep.x.sum() == pytest.approx(12.0, abs=1e-8)
    assert rep.fw_gap >= -1e-12


def test_simplex_below_birkhoff():
    # the scaled simplex contains the Birkhoff polytope
    for seed in range(5):
        pair = _pair(6, 0.1, seed + 50)
        rs = solve_simplex(pair.a, pair.b, tol_gap=1e-9, max_iters=100000)
        rb = solve_birkhoff(pair.a, pair.b)
        assert rs.objective <= rb.objective + 1e-9


def test_simplex_sigma_zero_recovery_n50():
    pair = _pair(50, 0.0, 9)
    rep = solve_simplex(pair.a, pair.b)
    assert overlap_fraction(hungarian_round(rep.x), pair.pi_star) == 1.0


def test_simplex_monotone_prefix():
    pair = _pair(10, 0.3, 11)
    objs = [
        solve_simplex(pair.a, pair.b, max_iters=k).objective
        for k in (10, 30, 100, 300)
    ]
    assert all(a >= b - 1e-12 for a, b in zip(objs, objs[1:]))


def test_grampa_matches_dense_kkt():
    for seed in range(3):
        pair = _pair(8, 0.2, seed + 60)
        rep = solve_grampa(pair.a, pair.b, eta=0.2)
        ref = grampa_dense_kkt(pair.a, pair.b, 0.2)
        assert np.linalg.norm(rep.x - ref, "fro") < 1e-6


def test_grampa_mass_constraint():
    pair = _pair(20, 0.3, 12)
    rep = solve_grampa(pair.a, pair.b)
    assert rep.x.sum() == pytest.approx(20.0, abs=1e-8)


def test_grampa_rejects_bad_eta():
    pair = _pair(5, 0.1, 13)
    with pytest.raises(InvalidInput):
        solve_grampa(pair.a, pair.b, eta=0.0)
    with pytest.raises(InvalidInput):
        solve_grampa(pair.a, pair.b, eta=-1.0)


def test_solvers_reject_asymmetric_inputs():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    sym = np.eye(2)
    for solver in (solve_birkhoff, solve_simplex, solve_grampa):
        with pytest.raises(InvalidInput):
            solver(bad, sym)
        with pytest.raises(InvalidInput):
            solver(sym, bad)


def test_population_mixing_formula():
    assert population_mixing(10, 0.0) == 1.0
    eps = population_mixing(49, 0.1)
    assert eps == pytest.approx(2.0 / (2.0 + 0.01 * 50))
    with pytest.raises(InvalidInput):
        population_mixing(0, 0.1)
    with pytest.raises(InvalidInput):
        population_mixing(5, -0.1)


def test_population_distance_closed_form():
    for n, sigma in [(50, 0.05), (50, 0.1), (50, 0.3)]:
        eps = population_mixing(n, sigma)
        X = population_optimum(n, sigma)
        d = np.linalg.norm(np.eye(n) - X, "fro")
        assert abs(population_distance(n, sigma) - d) < 1e-12
        assert abs(population_distance(n, sigma) - (1 - eps) * np.sqrt(n - 1)) < 1e-12


def test_population_optimum_matches_pgd_oracle():
    for sigma in (0.05, 0.1, 0.3):
        n = 50
        ref = pgd_population(n, sigma)
        X = population_optimum(n, sigma)
        assert np.linalg.norm(ref - X, "fro") < 1e-4


def test_population_objective_minimized_at_optimum():
    n, sigma = 30, 0.2
    X = population_optimum(n, sigma)
    f0 = population_objective(X, n, sigma)
    rng = make_rng(14)
    for _ in range(10):
        # perturb inside the affine hull of doubly stochastic matrices
        D = rng.normal(size=(n, n))
        D -= D.mean(axis=0, keepdims=True)
        D -= D.mean(axis=1, keepdims=True)
        assert population_objective(X + 1e-3 * D, n, sigma) >= f0 - 1e-12
