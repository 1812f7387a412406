import numpy as np
import pytest

from subsetsel import (
    InnerConfig,
    ProblemSpec,
    SquaredLoss,
    cdss_solve,
    diht_solve,
    dual_ascent_solve,
    enumerate_solve,
    inner_solve,
    primal_objective,
    standardize,
)
from subsetsel.inner import STOP_GAP_EPS

from conftest import random_problem, saddle_instance

LOSS = SquaredLoss()


class TestDualAscent:
    def test_zero_response(self):
        prob = ProblemSpec(np.eye(4), np.zeros(4), 0.1, 0.1, 1.0)
        sol = dual_ascent_solve(prob, InnerConfig())
        np.testing.assert_array_equal(sol.beta, np.zeros(4))
        assert sol.gap == 0.0

    def test_primal_cd_step_helps(self):
        # at matched iteration counts and step, the with-CD loop reaches a
        # gap at least as small on most seeds
        wins = 0
        cfg = InnerConfig(step_size=5e-4, eps=1e-13, zeta=1e-16, max_iters=150)
        for seed in range(50):
            prob = random_problem(seed, 20, 15, k=2)
            with_cd = inner_solve(prob, np.zeros(15), np.zeros(20), cfg)
            without = dual_ascent_solve(prob, cfg)
            if with_cd.sub_gap <= without.gap + 1e-12:
                wins += 1
        assert wins >= 40

    def test_identical_when_beta_stays_zero(self):
        # penalties so large that the link never activates: the CD sweep is
        # a no-op and both solvers coincide
        prob = random_problem(1, 10, 6, lam0=1e4, lam1=1e4, lam2=1.0)
        cfg = InnerConfig(step_size=0.05, eps=1e-12, zeta=1e-15, max_iters=200)
        a = dual_ascent_solve(prob, cfg)
        b = inner_solve(prob, np.zeros(6), np.zeros(10), cfg)
        np.testing.assert_array_equal(a.beta, b.beta)
        np.testing.assert_array_equal(a.alpha, b.alpha)


class TestCdss:
    def test_orthonormal_single_sweep(self):
        # orthonormal design: one sweep lands on the closed-form threshold
        # solution and the second sweep certifies it
        rng = np.random.default_rng(5)
        A = rng.standard_normal((20, 8))
        Q, _ = np.linalg.qr(A - A.mean(axis=0))
        beta_true = np.zeros(8)
        beta_true[[1, 4]] = [1.2, -0.9]
        y = Q @ beta_true
        prob = ProblemSpec(Q, y, 0.03, 0.02, 1.0)
        sol = cdss_solve(prob, eps=1e-10, zeta=1e-14, max_iters=50)
        assert sol.inner_iterations <= 2
        bt = Q.T @ y
        expected = np.where(
            (np.abs(bt) - 0.02) / 3.0 >= np.sqrt(2 * 0.03 / 3.0),
            np.sign(bt) * (np.abs(bt) - 0.02) / 3.0,
            0.0,
        )
        np.testing.assert_allclose(sol.beta, expected, atol=1e-10)

    def test_matches_enumeration_on_clean_instances(self):
        for seed in range(5):
            X, y, _ = saddle_instance(seed, n=25, p=10, k=2, snr=1e6)
            Xs, yc, _ = standardize(X, y)
            prob = ProblemSpec(Xs, yc, 0.03, 0.02, 1.0)
            sol = cdss_solve(prob, eps=1e-9, zeta=1e-13, max_iters=10_000)
            orc = enumerate_solve(prob)
            assert sol.primal - orc.best_objective <= 1e-6

    def test_primal_non_increasing(self):
        prob = random_problem(7, 30, 20, k=3)
        primals = []
        cdss_solve(prob, eps=1e-10, zeta=1e-13, max_iters=200,
                   trace_cb=lambda t, p, d, g: primals.append(p))
        assert all(b <= a + 1e-12 for a, b in zip(primals, primals[1:]))


class TestDiht:
    def test_k_equals_p_matches_dual_ascent(self):
        prob = random_problem(9, 12, 8, k=2)
        cfg = InnerConfig(step_size=0.01, eps=1e-10, zeta=1e-13, max_iters=300)
        a = dual_ascent_solve(prob, cfg)
        b = diht_solve(prob, 8, cfg)
        np.testing.assert_array_equal(a.beta, b.beta)
        np.testing.assert_array_equal(a.alpha, b.alpha)

    def test_k1_identity_design_selects_best_coordinate(self):
        y = np.array([3.0, 1.0, 2.0])
        prob = ProblemSpec(np.eye(3), y, 0.01, 0.01, 0.5)
        cfg = InnerConfig(step_size=0.3, eps=1e-10, zeta=1e-14, max_iters=2000)
        sol = diht_solve(prob, 1, cfg)
        np.testing.assert_array_equal(sol.support, [0])
        # best single coordinate per the per-coordinate objective gain
        gains = [
            0.5 * y @ y - primal_objective(prob, b, LOSS)
            for b in np.diag([(abs(v) - 0.01) / (1 + 2 * 0.5) for v in y])
        ]
        assert int(np.argmax(gains)) == 0

    def test_sparsity_bound(self):
        for k in (1, 4, 7):
            prob = random_problem(11, 15, 10, k=3)
            cfg = InnerConfig(step_size=0.05, eps=1e-12, zeta=1e-15, max_iters=100)
            sol = diht_solve(prob, k, cfg)
            assert np.count_nonzero(sol.beta) <= k

    def test_k_validation(self):
        prob = random_problem(12, 6, 4)
        with pytest.raises(ValueError):
            diht_solve(prob, 0, InnerConfig())
        with pytest.raises(ValueError):
            diht_solve(prob, 5, InnerConfig())


def test_best_iterate_gap_non_increasing_for_dual_methods():
    from subsetsel import duality_gap

    prob = random_problem(13, 20, 12, k=2)
    cfg = InnerConfig(step_size=5e-4, eps=1e-13, zeta=1e-16, max_iters=200)
    init_gap = duality_gap(prob, np.zeros(12), np.zeros(20), LOSS).gap
    for run in (
        lambda cb: dual_ascent_solve(prob, cfg, trace_cb=cb),
        lambda cb: diht_solve(prob, 5, cfg, trace_cb=cb),
    ):
        gaps = []
        sol = run(lambda t, p, d, g: gaps.append(g))
        best = np.minimum.accumulate(gaps)
        assert (np.diff(best) <= 0).all()
        assert sol.gap <= init_gap + 1e-12
