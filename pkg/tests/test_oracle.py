import numpy as np
import pytest

from subsetsel import (
    ProblemSpec,
    SquaredLoss,
    cd_threshold_T,
    dual_objective,
    enumerate_solve,
    primal_objective,
)

from conftest import random_problem

LOSS = SquaredLoss()


def test_huge_lambda0_selects_empty_support(rng):
    prob = random_problem(0, 10, 6, lam0=1e6)
    res = enumerate_solve(prob)
    assert res.best_support.size == 0
    np.testing.assert_array_equal(res.best_beta, np.zeros(6))
    assert res.best_objective == pytest.approx(0.5 * prob.y @ prob.y)
    assert res.supports_evaluated == 2**6


def test_refuses_large_p(rng):
    prob = random_problem(1, 10, 15)
    with pytest.raises(ValueError, match="refused"):
        enumerate_solve(prob)


def test_matches_coordinate_closed_form_on_orthonormal_design():
    rng = np.random.default_rng(2)
    A = rng.standard_normal((12, 2))
    Q, _ = np.linalg.qr(A - A.mean(axis=0))
    y = Q @ np.array([1.1, -0.4]) + 0.01 * rng.standard_normal(12)
    prob = ProblemSpec(Q, y, 0.05, 0.1, 0.5)
    res = enumerate_solve(prob)
    # orthonormal columns: the exact coordinate step from zero is optimal
    expected = np.array([cd_threshold_T(prob, np.zeros(2), j) for j in range(2)])
    np.testing.assert_allclose(res.best_beta, expected, atol=1e-9)


def test_objective_consistent_with_primal_form(rng):
    for seed in range(5):
        prob = random_problem(10 + seed, 15, 9)
        res = enumerate_solve(prob)
        assert res.best_objective == pytest.approx(
            primal_objective(prob, res.best_beta, LOSS), abs=1e-10
        )


def test_weak_duality_against_sampled_duals(rng):
    prob = random_problem(3, 10, 8)
    res = enumerate_solve(prob)
    for _ in range(50):
        alpha = rng.normal(size=10)
        assert dual_objective(prob, alpha, LOSS) <= res.best_objective + 1e-9


def test_beats_every_explicit_support_solve(rng):
    # independent check: ridge-lasso solve per support via projected CD
    prob = random_problem(4, 12, 6)
    res = enumerate_solve(prob)
    best = 0.5 * float(prob.y @ prob.y)
    for mask in range(1, 2**6):
        idx = [j for j in range(6) if mask >> j & 1]
        beta = np.zeros(6)
        for _ in range(3000):
            for j in idx:
                r = prob.y - prob.X @ beta + beta[j] * prob.X[:, j]
                bt = float(prob.X[:, j] @ r)
                mag = abs(bt) - prob.lambda1
                beta[j] = (
                    np.sign(bt) * mag / (prob.col_sq_norms[j] + 2 * prob.lambda2)
                    if mag > 0
                    else 0.0
                )
        val = primal_objective(prob, beta, LOSS)
        best = min(best, val)
    assert res.best_objective <= best + 1e-8


def test_permutation_invariant_objective(rng):
    prob = random_problem(5, 12, 7)
    perm = rng.permutation(7)
    prob_perm = ProblemSpec(
        prob.X[:, perm], prob.y, prob.lambda0, prob.lambda1, prob.lambda2
    )
    a = enumerate_solve(prob)
    b = enumerate_solve(prob_perm)
    assert a.best_objective == pytest.approx(b.best_objective, abs=1e-10)
    # a 1e-12 objective gap bounds the coefficients only to ~sqrt(gap)
    np.testing.assert_allclose(b.best_beta, a.best_beta[perm], atol=1e-5)


def test_monotone_in_lambda0(rng):
    X = random_problem(6, 14, 8).X
    y = random_problem(6, 14, 8).y
    sizes = []
    for lam0 in (1e-4, 1e-3, 1e-2, 1e-1, 1.0):
        prob = ProblemSpec(X, y, lam0, 0.02, 1.0)
        sizes.append(enumerate_solve(prob).best_support.size)
    assert all(b <= a for a, b in zip(sizes, sizes[1:]))
