"""Inner primal-dual loop: dual super-gradient ascent with feasible
projection, closed-form link back to the primal, and one coordinate-descent
pass per iteration.

The loop keeps the best pair seen (smallest duality gap, warm-start pair
included) and stops on the first of: gap below eps, gap change over two
iterations below zeta, three consecutive gap increases, or the iteration
cap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .losses import LossModel, SquaredLoss
from .model import ProblemSpec, _link_vec, _penalties, _psi_sum

STOP_GAP_EPS = "gap_leq_eps"
STOP_GAP_CHANGE = "gap_change_leq_zeta"
STOP_MAX_ITERS = "max_iters"
STOP_GAP_INCREASING = "gap_increasing"


class DivergenceError(RuntimeError):
    """Raised when an iterate stops being finite (step size too large)."""


@dataclass
class InnerConfig:
    step_size: float = 5e-4
    step_schedule: str = "fixed"  # "fixed" or "inverse_t" (w_t = w / (t * gamma))
    zeta: float = 1e-6
    eps: float = 1e-6
    max_iters: int = 100_000
    # the coordinate step runs until no coordinate moves (T's fixed point);
    # a single pass would let the next link step erase most of its progress
    cd_max_sweeps: int = 100

    def __post_init__(self):
        if self.step_size <= 0 or self.zeta <= 0 or self.eps <= 0:
            raise ValueError("step_size, zeta and eps must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.cd_max_sweeps < 1:
            raise ValueError("cd_max_sweeps must be at least 1")
        if self.step_schedule not in ("fixed", "inverse_t"):
            raise ValueError(f"unknown step_schedule {self.step_schedule!r}")


@dataclass
class InnerResult:
    beta: np.ndarray
    alpha: np.ndarray
    sub_gap: float
    iterations: int
    stop_reason: str
    #: O(n) column operations spent (gradient/link matvecs + CD updates)
    column_ops: int = 0


def super_gradient(
    problem: ProblemSpec, beta: np.ndarray, alpha: np.ndarray, loss: LossModel
) -> np.ndarray:
    """g_i = x_i^T beta - l*'(alpha_i); for squares this is X beta - y - alpha."""
    return problem.X @ np.asarray(beta, dtype=np.float64) - loss.conj_deriv_vec(
        np.asarray(alpha, dtype=np.float64), problem.y
    )


def primal_dual_loop(
    problem: ProblemSpec,
    init_beta: np.ndarray,
    init_alpha: np.ndarray,
    cfg: InnerConfig,
    loss: LossModel,
    primal_cd: bool = True,
    hard_k: int | None = None,
    trace_cb=None,
) -> InnerResult:
    """Shared engine behind inner_solve and the dual-space baselines.

    primal_cd=False drops the coordinate-descent step (dual ascent only);
    hard_k keeps only the k largest-|beta| entries after each link, ties
    resolved to the lower index.
    """
    X = problem.X
    y = problem.y
    n, p = problem.n, problem.p
    lam0, lam1, lam2 = problem.lambda0, problem.lambda1, problem.lambda2
    all_idx = np.arange(p, dtype=np.int64)
    do_cd = primal_cd and loss.supports_primal_cd

    beta = np.array(init_beta, dtype=np.float64, copy=True)
    alpha = np.asarray(loss.project_vec(np.asarray(init_alpha, dtype=np.float64)), dtype=np.float64).copy()
    fit = X @ beta

    def evaluate(eta_vec):
        primal = loss.eval_sum(fit, y) + _penalties(problem, beta)
        dual = -loss.conj_sum(alpha, y) + _psi_sum(eta_vec, lam0, lam1, lam2)
        return primal, dual, primal - dual

    eta_vec = -(X.T @ alpha) / (2.0 * lam2)
    primal, dual, gap = evaluate(eta_vec)
    if not np.isfinite(gap):
        raise DivergenceError("non-finite objective at iteration 0")
    if trace_cb is not None:
        trace_cb(0, primal, dual, gap)
    best_beta, best_alpha, best_gap = beta.copy(), alpha.copy(), gap
    gap_hist = [gap]
    increase_streak = 0
    stop_reason = STOP_MAX_ITERS
    iterations = 0
    column_ops = p  # the initial X^T alpha

    if gap <= cfg.eps:
        return InnerResult(best_beta, best_alpha, best_gap, 0, STOP_GAP_EPS, column_ops)

    for t in range(1, cfg.max_iters + 1):
        iterations = t
        w = cfg.step_size if cfg.step_schedule == "fixed" else cfg.step_size / (t * loss.mu)
        g = fit - loss.conj_deriv_vec(alpha, y)
        alpha = np.asarray(loss.project_vec(alpha + w * g), dtype=np.float64)
        eta_vec = -(X.T @ alpha) / (2.0 * lam2)
        beta = _link_vec(eta_vec, lam0, lam1, lam2)
        column_ops += 2 * p  # X^T alpha and the upcoming X beta / residual
        if hard_k is not None and hard_k < p:
            order = np.argsort(-np.abs(beta), kind="stable")
            beta[order[hard_k:]] = 0.0
        if do_cd:
            resid = y - X @ beta
            for _ in range(cfg.cd_max_sweeps):
                changed = kernels.cd_sweep_inplace(
                    X, resid, beta, problem.col_sq_norms, all_idx, lam0, lam1, lam2
                )
                column_ops += p + changed
                if changed == 0:
                    break
            fit = y - resid
        else:
            fit = X @ beta

        primal, dual, gap = evaluate(eta_vec)
        if not (np.isfinite(gap) and np.isfinite(alpha).all()):
            raise DivergenceError(
                f"non-finite objective at iteration {t}; reduce the step size"
            )
        if trace_cb is not None:
            trace_cb(t, primal, dual, gap)
        if gap < best_gap:
            best_gap = gap
            best_beta = beta.copy()
            best_alpha = alpha.copy()
        if gap > gap_hist[-1]:
            increase_streak += 1
        else:
            increase_streak = 0
        gap_hist.append(gap)

        if gap <= cfg.eps:
            stop_reason = STOP_GAP_EPS
            break
        if len(gap_hist) >= 3 and abs(gap_hist[-3] - gap_hist[-1]) <= cfg.zeta:
            stop_reason = STOP_GAP_CHANGE
            break
        if increase_streak >= 3:
            stop_reason = STOP_GAP_INCREASING
            break

    return InnerResult(best_beta, best_alpha, best_gap, iterations, stop_reason, column_ops)


def inner_solve(
    problem: ProblemSpec,
    init_beta: np.ndarray,
    init_alpha: np.ndarray,
    cfg: InnerConfig,
    loss: LossModel | None = None,
    trace_cb=None,
) -> InnerResult:
    """Run the primal-dual loop on a (sub-)problem until its gap settles."""
    loss = loss if loss is not None else SquaredLoss()
    return primal_dual_loop(
        problem, init_beta, init_alpha, cfg, loss, primal_cd=True, trace_cb=trace_cb
    )
