"""Per-sample loss models and their Fenchel conjugates.

The scalar methods are the contract (and what the conjugate identities are
tested against); the vectorized hooks exist so solver hot paths do not pay a
Python loop per sample.  Their default implementations fall back to the
scalar methods, so a new loss only has to override them for speed.
"""
from __future__ import annotations

import numpy as np


class LossModel:
    """Convex per-sample loss l(u, y) with conjugate-side quantities.

    ``mu`` is the strong-convexity constant of the conjugate, equivalently
    1/smoothness of the loss.  ``project_feasible`` maps a scalar onto the
    dual feasible set; losses whose conjugate is finite everywhere use the
    identity.  ``dual_from_fit`` returns an element of the inverse conjugate
    gradient at the fitted value, projected onto the feasible set.
    """

    mu: float = 1.0
    #: the primal coordinate-descent step is derived for squared error only
    supports_primal_cd: bool = False

    def eval(self, u: float, y: float) -> float:
        raise NotImplementedError

    def deriv(self, u: float, y: float) -> float:
        raise NotImplementedError

    def conj(self, a: float, y: float) -> float:
        raise NotImplementedError

    def conj_deriv(self, a: float, y: float) -> float:
        raise NotImplementedError

    def project_feasible(self, a: float) -> float:
        raise NotImplementedError

    def dual_from_fit(self, u: float, y: float) -> float:
        raise NotImplementedError

    # -- vectorized hooks, default to scalar loops ---------------------------

    def eval_sum(self, u: np.ndarray, y: np.ndarray) -> float:
        return float(sum(self.eval(float(ui), float(yi)) for ui, yi in zip(u, y)))

    def conj_sum(self, a: np.ndarray, y: np.ndarray) -> float:
        return float(sum(self.conj(float(ai), float(yi)) for ai, yi in zip(a, y)))

    def deriv_vec(self, u: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array([self.deriv(float(ui), float(yi)) for ui, yi in zip(u, y)])

    def conj_deriv_vec(self, a: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array([self.conj_deriv(float(ai), float(yi)) for ai, yi in zip(a, y)])

    def project_vec(self, a: np.ndarray) -> np.ndarray:
        return np.array([self.project_feasible(float(ai)) for ai in a])

    def dual_from_fit_vec(self, u: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array([self.dual_from_fit(float(ui), float(yi)) for ui, yi in zip(u, y)])


class SquaredLoss(LossModel):
    """Squared error l(u, y) = (y - u)^2 / 2.

    Conjugate l*(a, y) = a^2/2 + y*a, with gradient a + y; the feasible set
    is all of R, so projection is the identity and the dual point matching a
    fit u is u - y.
    """

    mu = 1.0
    supports_primal_cd = True

    def eval(self, u: float, y: float) -> float:
        return 0.5 * (y - u) ** 2

    def deriv(self, u: float, y: float) -> float:
        return u - y

    def conj(self, a: float, y: float) -> float:
        return 0.5 * a * a + y * a

    def conj_deriv(self, a: float, y: float) -> float:
        return a + y

    def project_feasible(self, a: float) -> float:
        return a

    def dual_from_fit(self, u: float, y: float) -> float:
        return u - y

    def eval_sum(self, u, y):
        d = y - u
        return 0.5 * float(d @ d)

    def conj_sum(self, a, y):
        return 0.5 * float(a @ a) + float(y @ a)

    def deriv_vec(self, u, y):
        return u - y

    def conj_deriv_vec(self, a, y):
        return a + y

    def project_vec(self, a):
        return a

    def dual_from_fit_vec(self, u, y):
        return u - y
