"""Outer driver: active-set growth, gap-ball screening and the full-problem
stopping certificate.

Each outer step solves the sub-problem on the current active set (warm
started), certifies the full-problem duality gap, screens features whose
dual ball excludes them from the support, and while inclusion is on moves
the highest-scoring reservoir features into the active set.  Screened
features are discarded for good; the rule is safe, so they can never enter
the optimal support.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .inner import InnerConfig, InnerResult, inner_solve
from .losses import LossModel, SquaredLoss
from .model import GapCertificate, ProblemSpec, duality_gap, primal_objective

STOP_GAP_CONVERGED = "gap_converged"
STOP_MAX_OUTER = "max_outer"

_LOG_BASES = {"e": math.e, "10": 10.0, "2": 2.0}


@dataclass
class ActiveSet:
    """Active / reservoir split; discarded features live in neither."""

    active: np.ndarray
    reservoir: np.ndarray
    do_add: bool = True

    def __post_init__(self):
        self.active = np.asarray(np.sort(self.active), dtype=np.int64)
        self.reservoir = np.asarray(np.sort(self.reservoir), dtype=np.int64)
        if np.intersect1d(self.active, self.reservoir).size:
            raise ValueError("active and reservoir sets overlap")


@dataclass
class OuterConfig:
    xi: float = 1e-6
    inclusion_c: float = 4.0
    init_size: int | None = None  # default: one inclusion batch, ceil(c*log p)
    max_outer: int = 100
    inner: InnerConfig = field(default_factory=InnerConfig)
    log_base: str = "e"
    enable_screening: bool = True
    diagnostics: bool = False  # keep per-step dual vectors and screened sets

    def __post_init__(self):
        if self.xi <= 0 or self.inclusion_c <= 0:
            raise ValueError("xi and inclusion_c must be positive")
        if self.init_size is not None and self.init_size < 1:
            raise ValueError("init_size must be at least 1")
        if self.max_outer < 1:
            raise ValueError("max_outer must be at least 1")
        if self.log_base not in _LOG_BASES:
            raise ValueError("log_base must be one of 'e', '10', '2'")


@dataclass
class OuterTraceStep:
    step: int
    stage: str  # include / screen / pursue
    active_size: int
    reservoir_size: int
    screened_count: int
    primal: float
    dual: float
    gap: float
    radius: float
    wall_time_ms: float


@dataclass
class Solution:
    beta: np.ndarray
    alpha: np.ndarray
    support: np.ndarray
    primal: float
    dual: float
    gap: float
    radius: float
    stop_reason: str
    steps: list
    screened_log: list  # (step, removed index array) pairs
    coordinate_touches: int  # sum over outer steps of active size x inner iterations
    inner_iterations: int
    column_ops: int = 0  # precise count of O(n) column operations
    dual_iterates: list | None = None


def _batch_size(p: int, c: float, log_base: str) -> int:
    return max(1, math.ceil(c * math.log(p) / math.log(_LOG_BASES[log_base])))


def init_active_set(problem: ProblemSpec, loss: LossModel, k0: int) -> ActiveSet:
    """Top-k0 features by |x_j^T l'(0)| (|x_j^T y| for squares), rest to the
    reservoir; ties go to the lower index."""
    if not 1 <= k0 <= problem.p:
        raise ValueError(f"k0 must be in [1, {problem.p}]")
    grad0 = loss.deriv_vec(np.zeros(problem.n), problem.y)
    scores = np.abs(problem.X.T @ grad0)
    order = np.argsort(-scores, kind="stable")
    return ActiveSet(active=order[:k0], reservoir=order[k0:])


def _screen_scores(problem: ProblemSpec, alpha: np.ndarray, radius: float, idx: np.ndarray) -> np.ndarray:
    corr = np.abs(problem.X[:, idx].T @ alpha)
    norms = problem.col_norms[idx]
    if math.isinf(radius):
        # 0 * inf is nan; zero columns contribute nothing either way
        ball = np.where(norms > 0, np.inf, 0.0)
    else:
        ball = norms * radius
    return corr + ball


def _screen_threshold(problem: ProblemSpec) -> float:
    return 2.0 * math.sqrt(problem.lambda0 * problem.lambda2) + problem.lambda1


def screening_test(problem: ProblemSpec, alpha: np.ndarray, radius: float, j: int) -> bool:
    """True when feature j is certified outside the optimal support."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    score = _screen_scores(problem, np.asarray(alpha, dtype=np.float64), radius, np.array([j]))[0]
    return bool(score < _screen_threshold(problem))


def inclusion_stop_test(
    problem: ProblemSpec, alpha: np.ndarray, radius: float, reservoir: np.ndarray
) -> bool:
    """True when every reservoir feature passes the screening bound."""
    reservoir = np.asarray(reservoir, dtype=np.int64)
    if reservoir.size == 0:
        return True
    scores = _screen_scores(problem, np.asarray(alpha, dtype=np.float64), radius, reservoir)
    return bool(scores.max() < _screen_threshold(problem))


def feature_inclusion(
    problem: ProblemSpec, alpha: np.ndarray, aset: ActiveSet, c: float, log_base: str = "e"
) -> ActiveSet:
    """Move the ceil(c*log p) highest-|x_j^T alpha| reservoir features in."""
    if not aset.do_add:
        raise ValueError("feature_inclusion called with do_add=False")
    h = min(_batch_size(problem.p, c, log_base), aset.reservoir.size)
    if h == 0:
        return ActiveSet(aset.active, aset.reservoir, aset.do_add)
    scores = np.abs(problem.X[:, aset.reservoir].T @ np.asarray(alpha, dtype=np.float64))
    order = np.argsort(-scores, kind="stable")
    moved = aset.reservoir[order[:h]]
    kept = aset.reservoir[np.sort(order[h:])]
    return ActiveSet(np.concatenate([aset.active, moved]), kept, aset.do_add)


def screen_features(
    problem: ProblemSpec, alpha: np.ndarray, radius: float, aset: ActiveSet
) -> tuple[ActiveSet, np.ndarray]:
    """Drop certified-inactive features from the active set (discarded, not
    returned to the reservoir)."""
    if aset.active.size == 0:
        return aset, np.array([], dtype=np.int64)
    scores = _screen_scores(problem, np.asarray(alpha, dtype=np.float64), radius, aset.active)
    out = scores < _screen_threshold(problem)
    removed = aset.active[out]
    kept = aset.active[~out]
    return ActiveSet(kept, aset.reservoir, aset.do_add), removed


def solve(
    problem: ProblemSpec,
    cfg: OuterConfig | None = None,
    loss: LossModel | None = None,
    trace_cb=None,
) -> Solution:
    """Dynamic-incremental solve of the full problem.

    Parameters
    ----------
    problem : ProblemSpec
    cfg : OuterConfig, optional
        Outer stopping threshold, inclusion constant and the inner-loop
        configuration.
    loss : LossModel, optional
        Defaults to squared error.
    trace_cb : callable, optional
        Called with one OuterTraceStep per outer step.

    Returns the best primal/dual pair with a full-problem gap certificate.
    The primal point is monotone across outer steps: if a sub-solve returns
    a worse primal vector than the incumbent (possible right after features
    are added, since the link step rebuilds beta from alpha), the incumbent
    is kept for the certificate; both are valid primal points.
    """
    cfg = cfg if cfg is not None else OuterConfig()
    loss = loss if loss is not None else SquaredLoss()
    p = problem.p
    k0 = cfg.init_size if cfg.init_size is not None else min(p, _batch_size(p, cfg.inclusion_c, cfg.log_base))
    aset = init_active_set(problem, loss, k0)

    beta = np.zeros(p)
    alpha = np.zeros(problem.n)
    best_primal = math.inf
    steps: list[OuterTraceStep] = []
    screened_log: list[tuple[int, np.ndarray]] = []
    dual_iterates: list[tuple[np.ndarray, float]] | None = [] if cfg.diagnostics else None
    touches = 0
    inner_total = 0
    column_ops = 0
    stop_reason = STOP_MAX_OUTER
    cert = duality_gap(problem, beta, alpha, loss)
    t0 = time.perf_counter()

    for s in range(cfg.max_outer):
        sub = problem.restrict(aset.active)
        res: InnerResult = inner_solve(sub, beta[aset.active], alpha, cfg.inner, loss)
        inner_total += res.iterations
        touches += res.iterations * aset.active.size
        column_ops += res.column_ops + problem.p  # full-problem X^T alpha below

        candidate = np.zeros(p)
        candidate[aset.active] = res.beta
        cand_primal = primal_objective(problem, candidate, loss)
        if cand_primal <= best_primal:
            beta = candidate
            best_primal = cand_primal
        alpha = res.alpha

        cert = duality_gap(problem, beta, alpha, loss)
        if dual_iterates is not None:
            dual_iterates.append((alpha.copy(), cert.radius))

        added = 0
        screened = np.array([], dtype=np.int64)
        converged = cert.gap < cfg.xi
        if not converged:
            if cfg.enable_screening:
                aset, screened = screen_features(problem, alpha, cert.radius, aset)
                if screened.size:
                    beta[screened] = 0.0
                    best_primal = primal_objective(problem, beta, loss)
                    screened_log.append((s, screened))
            if aset.do_add:
                if inclusion_stop_test(problem, alpha, cert.radius, aset.reservoir):
                    aset.do_add = False
                else:
                    before = aset.active.size
                    aset = feature_inclusion(problem, alpha, aset, cfg.inclusion_c, cfg.log_base)
                    added = aset.active.size - before

        stage = "include" if added else ("screen" if screened.size else "pursue")
        rec = OuterTraceStep(
            step=s,
            stage=stage,
            active_size=sub.p,
            reservoir_size=aset.reservoir.size,
            screened_count=int(screened.size),
            primal=cert.primal,
            dual=cert.dual,
            gap=cert.gap,
            radius=cert.radius,
            wall_time_ms=(time.perf_counter() - t0) * 1e3,
        )
        steps.append(rec)
        if trace_cb is not None:
            trace_cb(rec)
        if converged:
            stop_reason = STOP_GAP_CONVERGED
            break

    support = np.flatnonzero(beta)
    return Solution(
        beta=beta,
        alpha=alpha,
        support=support,
        primal=cert.primal,
        dual=cert.dual,
        gap=cert.gap,
        radius=cert.radius,
        stop_reason=stop_reason,
        steps=steps,
        screened_log=screened_log,
        coordinate_touches=touches,
        inner_iterations=inner_total,
        column_ops=column_ops,
        dual_iterates=dual_iterates,
    )
