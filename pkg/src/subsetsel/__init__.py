"""Primal-dual best-subset-selection solver with gap-safe screening and
incremental feature inclusion, plus baselines, a brute-force oracle and a
synthetic-experiment harness."""

from .losses import LossModel, SquaredLoss
from .model import (
    GapCertificate,
    ProblemSpec,
    cd_sweep,
    cd_threshold_T,
    dual_from_primal,
    dual_objective,
    duality_gap,
    eta,
    eta_threshold,
    lagrangian,
    link_B,
    primal_objective,
    psi,
)
from .inner import DivergenceError, InnerConfig, InnerResult, inner_solve, super_gradient
from .incremental import (
    ActiveSet,
    OuterConfig,
    OuterTraceStep,
    Solution,
    feature_inclusion,
    inclusion_stop_test,
    init_active_set,
    screen_features,
    screening_test,
    solve,
)
from .baselines import cdss_solve, diht_solve, dual_ascent_solve
from .oracle import OracleResult, enumerate_solve
from .synth import (
    Standardization,
    SyntheticDataset,
    SyntheticSpec,
    estimation_error,
    generate,
    pssr,
    standardize,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveSet",
    "DivergenceError",
    "GapCertificate",
    "InnerConfig",
    "InnerResult",
    "LossModel",
    "OracleResult",
    "OuterConfig",
    "OuterTraceStep",
    "ProblemSpec",
    "Solution",
    "SquaredLoss",
    "Standardization",
    "SyntheticDataset",
    "SyntheticSpec",
    "cd_sweep",
    "cd_threshold_T",
    "cdss_solve",
    "diht_solve",
    "dual_ascent_solve",
    "dual_from_primal",
    "dual_objective",
    "duality_gap",
    "enumerate_solve",
    "estimation_error",
    "eta",
    "eta_threshold",
    "feature_inclusion",
    "generate",
    "inclusion_stop_test",
    "init_active_set",
    "inner_solve",
    "lagrangian",
    "link_B",
    "primal_objective",
    "pssr",
    "psi",
    "screen_features",
    "screening_test",
    "solve",
    "standardize",
    "super_gradient",
]
