"""Problem representation and the closed-form primal/dual quantities.

Everything here is a pure function of its inputs.  The threshold map, the
per-feature dual contribution and the coordinate step all share the same
sparsity threshold: a feature j is active exactly when |eta_j| reaches
eta0 = (2*sqrt(lam0*lam2) + lam1) / (2*lam2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .losses import LossModel, SquaredLoss


@dataclass
class ProblemSpec:
    """Dense design matrix, response and the three regularization weights.

    lambda2 must be strictly positive: the dual link divides by it.  X is
    stored Fortran-ordered so column access in the coordinate kernels is
    contiguous; column norms are cached at construction.
    """

    X: np.ndarray
    y: np.ndarray
    lambda0: float
    lambda1: float
    lambda2: float
    col_norms: np.ndarray = field(init=False, repr=False)
    col_sq_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        X = np.asfortranarray(self.X, dtype=np.float64)
        y = np.ascontiguousarray(self.y, dtype=np.float64).ravel()
        if X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        if y.shape[0] != X.shape[0]:
            raise ValueError(
                f"dimension mismatch: X has {X.shape[0]} rows, y has {y.shape[0]} entries"
            )
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("X and y must be finite")
        if self.lambda0 < 0 or self.lambda1 < 0:
            raise ValueError("lambda0 and lambda1 must be nonnegative")
        if self.lambda2 <= 0:
            raise ValueError(
                "lambda2 must be strictly positive (the dual link divides by it); "
                "pass a small lambda2 for a pure-L0 problem"
            )
        self.X = X
        self.y = y
        self.lambda0 = float(self.lambda0)
        self.lambda1 = float(self.lambda1)
        self.lambda2 = float(self.lambda2)
        self.col_sq_norms = np.einsum("ij,ij->j", X, X)
        self.col_norms = np.sqrt(self.col_sq_norms)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def restrict(self, idx: np.ndarray) -> "ProblemSpec":
        """Sub-problem over a column subset (same y, same weights)."""
        idx = np.asarray(idx, dtype=np.int64)
        return ProblemSpec(self.X[:, idx], self.y, self.lambda0, self.lambda1, self.lambda2)


@dataclass
class GapCertificate:
    """Primal/dual objective pair with gap and the dual-ball radius.

    The radius sqrt(2*max(gap, 0)/gamma) bounds the distance from the dual
    point to the dual optimum; gamma is the conjugate's strong-convexity
    constant.  A tiny negative gap (round-off) is clamped to zero for the
    radius only; the raw gap is kept.
    """

    primal: float
    dual: float
    gap: float
    radius: float


def eta_threshold(problem: ProblemSpec) -> float:
    """Sparsity threshold eta0 = (2*sqrt(lam0*lam2) + lam1) / (2*lam2)."""
    return (2.0 * math.sqrt(problem.lambda0 * problem.lambda2) + problem.lambda1) / (
        2.0 * problem.lambda2
    )


def eta(problem: ProblemSpec, alpha: np.ndarray) -> np.ndarray:
    """eta(alpha) = -X^T alpha / (2*lam2), one entry per feature."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (problem.n,):
        raise ValueError(f"dimension mismatch: alpha has shape {alpha.shape}, expected ({problem.n},)")
    return -(problem.X.T @ alpha) / (2.0 * problem.lambda2)


def link_B(eta_j: float, problem: ProblemSpec) -> float:
    """Map a dual score to the minimizing primal coefficient.

    Soft-thresholds by lam1/(2*lam2) and zeroes everything below eta0; ties
    at |eta_j| == eta0 take the nonzero branch (both branches are optimal
    there, this one deterministically).
    """
    if abs(eta_j) >= eta_threshold(problem):
        return math.copysign(abs(eta_j) - problem.lambda1 / (2.0 * problem.lambda2), eta_j)
    return 0.0


def psi(eta_j: float, problem: ProblemSpec) -> float:
    """Per-feature dual contribution: min_u of the coordinate objective."""
    if abs(eta_j) >= eta_threshold(problem):
        shift = abs(eta_j) - problem.lambda1 / (2.0 * problem.lambda2)
        return -problem.lambda2 * shift * shift + problem.lambda0
    return 0.0


def _link_vec(eta_vec: np.ndarray, lam0: float, lam1: float, lam2: float) -> np.ndarray:
    eta0 = (2.0 * math.sqrt(lam0 * lam2) + lam1) / (2.0 * lam2)
    mag = np.abs(eta_vec)
    return np.where(mag >= eta0, np.sign(eta_vec) * (mag - lam1 / (2.0 * lam2)), 0.0)


def _psi_sum(eta_vec: np.ndarray, lam0: float, lam1: float, lam2: float) -> float:
    eta0 = (2.0 * math.sqrt(lam0 * lam2) + lam1) / (2.0 * lam2)
    mag = np.abs(eta_vec)
    hit = mag >= eta0
    if not hit.any():
        return 0.0
    shift = mag[hit] - lam1 / (2.0 * lam2)
    return float(np.sum(-lam2 * shift * shift + lam0))


def _penalties(problem: ProblemSpec, beta: np.ndarray) -> float:
    nnz = int(np.count_nonzero(beta))
    return (
        problem.lambda1 * float(np.abs(beta).sum())
        + problem.lambda2 * float(beta @ beta)
        + problem.lambda0 * nnz
    )


def primal_objective(problem: ProblemSpec, beta: np.ndarray, loss: LossModel) -> float:
    """Loss plus all three penalties; the count term uses exact zeros."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (problem.p,):
        raise ValueError(f"dimension mismatch: beta has shape {beta.shape}, expected ({problem.p},)")
    fit = problem.X @ beta
    return loss.eval_sum(fit, problem.y) + _penalties(problem, beta)


def _check_feasible(alpha: np.ndarray, loss: LossModel) -> None:
    proj = loss.project_vec(alpha)
    if proj is not alpha and not np.array_equal(proj, alpha):
        raise ValueError("alpha is outside the dual feasible set")


def dual_objective(
    problem: ProblemSpec, alpha: np.ndarray, loss: LossModel, validate: bool = True
) -> float:
    """-sum_i l*(alpha_i) + sum_j psi(eta_j(alpha))."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (problem.n,):
        raise ValueError(f"dimension mismatch: alpha has shape {alpha.shape}, expected ({problem.n},)")
    if validate:
        _check_feasible(alpha, loss)
    eta_vec = eta(problem, alpha)
    return -loss.conj_sum(alpha, problem.y) + _psi_sum(
        eta_vec, problem.lambda0, problem.lambda1, problem.lambda2
    )


def lagrangian(
    problem: ProblemSpec, beta: np.ndarray, alpha: np.ndarray, loss: LossModel
) -> float:
    """sum_i (alpha_i * x_i^T beta - l*(alpha_i)) plus the penalties."""
    beta = np.asarray(beta, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    _check_feasible(alpha, loss)
    fit = problem.X @ beta
    return float(alpha @ fit) - loss.conj_sum(alpha, problem.y) + _penalties(problem, beta)


def cd_threshold_T(problem: ProblemSpec, beta: np.ndarray, j: int) -> float:
    """Exact coordinate minimizer for squared loss at feature j.

    With d_j = ||x_j||^2 the candidate magnitude is (|bt_j| - lam1)/(d_j +
    2*lam2); it is kept when it reaches sqrt(2*lam0/(d_j + 2*lam2)) and cut
    to zero otherwise.  For unit-norm columns d_j = 1 and this is the
    textbook soft+hard threshold step.
    """
    if not 0 <= j < problem.p:
        raise IndexError(f"feature index {j} out of range for p={problem.p}")
    beta = np.asarray(beta, dtype=np.float64)
    resid = problem.y - problem.X @ beta
    d = problem.col_sq_norms[j]
    bt = float(problem.X[:, j] @ resid) + beta[j] * d
    denom = d + 2.0 * problem.lambda2
    mag = abs(bt) - problem.lambda1
    if mag <= 0.0:
        return 0.0
    cand = mag / denom
    if cand >= math.sqrt(2.0 * problem.lambda0 / denom):
        return math.copysign(cand, bt)
    return 0.0


def cd_sweep(problem: ProblemSpec, beta: np.ndarray, active) -> np.ndarray:
    """One cyclic pass of cd_threshold_T over the active coordinates.

    Coordinates are visited in ascending index order with the residual
    updated incrementally; never increases the primal objective.
    """
    out = np.array(beta, dtype=np.float64, copy=True)
    idx = np.asarray(sorted(int(j) for j in active), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= problem.p):
        raise IndexError("active index out of range")
    resid = problem.y - problem.X @ out
    kernels.cd_sweep_inplace(
        problem.X, resid, out, problem.col_sq_norms, idx,
        problem.lambda0, problem.lambda1, problem.lambda2,
    )
    return out


def duality_gap(
    problem: ProblemSpec, beta: np.ndarray, alpha: np.ndarray, loss: LossModel
) -> GapCertificate:
    """Certificate for the pair (beta, alpha) with gamma = loss.mu."""
    primal = primal_objective(problem, beta, loss)
    dual = dual_objective(problem, alpha, loss)
    gap = primal - dual
    radius = math.sqrt(2.0 * max(gap, 0.0) / loss.mu)
    return GapCertificate(primal=primal, dual=dual, gap=gap, radius=radius)


def dual_from_primal(problem: ProblemSpec, beta: np.ndarray, loss: LossModel) -> np.ndarray:
    """Feasible dual point matching the fit X beta (residual for squares)."""
    beta = np.asarray(beta, dtype=np.float64)
    fit = problem.X @ beta
    return loss.project_vec(loss.dual_from_fit_vec(fit, problem.y))
