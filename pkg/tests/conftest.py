import numpy as np
import pytest

from subsetsel import ProblemSpec, standardize


def random_problem(seed, n, p, lam0=0.03, lam1=0.02, lam2=1.0, unit_cols=True, k=None):
    """Random dense instance; unit_cols standardizes columns to unit norm."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    k = k if k is not None else max(1, p // 10)
    beta = np.zeros(p)
    support = rng.choice(p, size=k, replace=False)
    beta[support] = rng.uniform(0.3, 1.0, size=k) * rng.choice([-1.0, 1.0], size=k)
    y = X @ beta + 0.1 * rng.standard_normal(n)
    if unit_cols:
        Xs, yc, _ = standardize(X, y)
        return ProblemSpec(Xs, yc, lam0, lam1, lam2)
    return ProblemSpec(X, y, lam0, lam1, lam2)


def saddle_instance(seed, n=30, p=12, k=3, coef_lo=0.22, coef_hi=0.32, snr=20.0):
    """Orthogonal-design instance whose optimum admits a saddle point.

    Columns are exactly orthonormal after standardization and coefficient
    magnitudes sit well clear of both activity thresholds, so the duality
    gap can be driven to zero (see notes in the acceptance module).
    Returns (X, y, beta_true) in raw scale.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, p))
    A -= A.mean(axis=0)
    Q, _ = np.linalg.qr(A)
    X = Q * np.sqrt(n)
    support = np.sort(rng.choice(p, size=k, replace=False))
    coefs = rng.uniform(coef_lo, coef_hi, size=k) * rng.choice([-1.0, 1.0], size=k)
    beta_true = np.zeros(p)
    beta_true[support] = coefs
    signal = X @ beta_true
    sigma = float(np.sqrt(np.var(signal) / snr))
    y = signal + rng.normal(0.0, sigma, size=n)
    return X, y, beta_true


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
