"""Synthetic linear-regression data with AR(1)-correlated features, plus the
two evaluation metrics (exact support recovery rate and relative estimation
error).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class SyntheticSpec:
    """Generator settings.

    Rows of X are MVN(0, Sigma) with Sigma_ij = rho^|i-j|.  A
    round(support_frac * p)-sized support gets coefficients uniform on
    [coef_low, coef_high]; draws with magnitude below coef_floor are
    redrawn so recovery stays well posed (set coef_floor=0 to allow
    arbitrarily small signals).  noise_sigma is chosen so the empirical
    variance of the noiseless signal over the noise variance equals snr.
    """

    n: int
    p: int
    rho: float = 0.4
    support_frac: float = 0.03
    snr: float = 20.0
    coef_low: float = -1.0
    coef_high: float = 1.0
    coef_floor: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be at least 1")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("rho must be in [0, 1)")
        if not 0.0 < self.support_frac <= 1.0:
            raise ValueError("support_frac must be in (0, 1]")
        if self.snr <= 0:
            raise ValueError("snr must be positive")
        if self.coef_low >= self.coef_high:
            raise ValueError("coef_low must be below coef_high")
        if self.coef_floor < 0:
            raise ValueError("coef_floor must be nonnegative")

    @property
    def support_size(self) -> int:
        return int(round(self.support_frac * self.p))


@dataclass
class SyntheticDataset:
    X: np.ndarray
    y: np.ndarray
    beta_true: np.ndarray
    noise_sigma: float

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.beta_true)


def generate(spec: SyntheticSpec) -> SyntheticDataset:
    """Draw one dataset; bitwise reproducible for a fixed spec."""
    k = spec.support_size
    if k == 0:
        raise ValueError(
            f"support_frac={spec.support_frac} rounds to an empty support at p={spec.p}"
        )
    rng = np.random.default_rng(spec.seed)
    z = rng.standard_normal((spec.n, spec.p))
    X = np.empty((spec.n, spec.p))
    X[:, 0] = z[:, 0]
    scale = math.sqrt(1.0 - spec.rho**2)
    for j in range(1, spec.p):
        X[:, j] = spec.rho * X[:, j - 1] + scale * z[:, j]

    support = np.sort(rng.choice(spec.p, size=k, replace=False))
    coefs = rng.uniform(spec.coef_low, spec.coef_high, size=k)
    if spec.coef_floor > 0:
        small = np.abs(coefs) < spec.coef_floor
        while small.any():
            coefs[small] = rng.uniform(spec.coef_low, spec.coef_high, size=int(small.sum()))
            small = np.abs(coefs) < spec.coef_floor
    beta_true = np.zeros(spec.p)
    beta_true[support] = coefs

    signal = X @ beta_true
    noise_sigma = math.sqrt(float(np.var(signal)) / spec.snr)
    y = signal + rng.normal(0.0, noise_sigma, size=spec.n)
    return SyntheticDataset(X=X, y=y, beta_true=beta_true, noise_sigma=noise_sigma)


def pssr(estimated_supports, true_support) -> float:
    """Fraction of replicates whose estimated support matches exactly."""
    supports = list(estimated_supports)
    if not supports:
        raise ValueError("need at least one estimated support")
    truth = frozenset(int(j) for j in true_support)
    hits = sum(1 for s in supports if frozenset(int(j) for j in s) == truth)
    return hits / len(supports)


def estimation_error(beta: np.ndarray, beta_true: np.ndarray) -> float:
    """||beta - beta_true|| / ||beta_true||."""
    beta_true = np.asarray(beta_true, dtype=np.float64)
    denom = float(np.linalg.norm(beta_true))
    if denom == 0.0:
        raise ValueError("beta_true must be nonzero")
    return float(np.linalg.norm(np.asarray(beta, dtype=np.float64) - beta_true)) / denom


@dataclass
class Standardization:
    """Column centering/scaling info needed to map results back."""

    col_mean: np.ndarray
    col_scale: np.ndarray
    y_mean: float

    def beta_to_original(self, beta: np.ndarray) -> np.ndarray:
        return np.asarray(beta, dtype=np.float64) / self.col_scale

    def intercept(self, beta: np.ndarray) -> float:
        return float(self.y_mean - self.col_mean @ self.beta_to_original(beta))


def standardize(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, Standardization]:
    """Center y, and center columns of X to unit Euclidean norm.

    Columns that are constant (zero norm after centering) are left as zero
    columns with scale 1 so the inverse map stays well defined.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    col_mean = X.mean(axis=0)
    Xc = X - col_mean
    col_scale = np.linalg.norm(Xc, axis=0)
    col_scale = np.where(col_scale > 0, col_scale, 1.0)
    y_mean = float(y.mean())
    return Xc / col_scale, y - y_mean, Standardization(col_mean, col_scale, y_mean)
