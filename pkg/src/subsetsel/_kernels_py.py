"""Pure-Python kernels; reference implementation and import-time fallback.

Mirrors subsetsel._kernels (the Cython extension) function for function.
The two backends perform the same arithmetic and may differ only in dot
product summation order (BLAS vs sequential), i.e. by round-off.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def cd_sweep_inplace(X, resid, beta, col_sq, active_idx, lam0, lam1, lam2):
    """One cyclic coordinate pass of the soft+hard threshold step T.

    ``resid`` must equal y - X @ beta on entry; both ``resid`` and ``beta``
    are updated in place.  Returns the number of coordinates that changed.
    """
    changed = 0
    for j in active_idx:
        j = int(j)
        xj = X[:, j]
        d = col_sq[j]
        denom = d + 2.0 * lam2
        bt = float(xj @ resid) + beta[j] * d
        mag = abs(bt) - lam1
        new = 0.0
        if mag > 0.0:
            cand = mag / denom
            if cand >= math.sqrt(2.0 * lam0 / denom):
                new = math.copysign(cand, bt)
        old = beta[j]
        if new != old:
            resid += (old - new) * xj
            beta[j] = new
            changed += 1
    return changed


def _restricted_cd_gap(G, b, beta, q, idx, lam1, lam2):
    # duality gap of the support-restricted convex problem in Gram form;
    # the ||y||^2 terms cancel between primal and dual.
    quad = 0.0
    lin = 0.0
    l1 = 0.0
    l2 = 0.0
    conj = 0.0
    for j in idx:
        bj = beta[j]
        quad += bj * q[j]
        lin += bj * b[j]
        l1 += abs(bj)
        l2 += bj * bj
        corr = abs(q[j] - b[j]) - lam1
        if corr > 0.0:
            conj += corr * corr
    return quad - lin + lam1 * l1 + lam2 * l2 + conj / (4.0 * lam2)


def oracle_enumerate(G, b, yty, lam0, lam1, lam2, tol, max_sweeps):
    """Exhaustive best-subset search on the Gram system.

    For every support the convex restriction (soft thresholding only, no
    hard cutoff) is solved by cyclic coordinate descent until its duality
    gap drops below ``tol``; the count penalty then scores the nonzeros the
    minimizer actually kept.  Returns (best_objective_conv_part + count
    penalty, best_beta, masks_evaluated); ties resolve to the support whose
    sorted index list is lexicographically smallest.
    """
    p = len(b)
    beta = np.zeros(p)
    q = np.zeros(p)
    best_obj = 0.5 * yty
    best_beta = np.zeros(p)
    best_support: tuple[int, ...] = ()
    evaluated = 1  # the empty support
    for mask in range(1, 1 << p):
        idx = [j for j in range(p) if mask >> j & 1]
        for j in idx:
            beta[j] = 0.0
            q[j] = 0.0
        for _ in range(max_sweeps):
            for j in idx:
                d = G[j, j]
                bt = b[j] - q[j] + beta[j] * d
                mag = abs(bt) - lam1
                new = math.copysign(mag, bt) / (d + 2.0 * lam2) if mag > 0.0 else 0.0
                delta = new - beta[j]
                if delta != 0.0:
                    for i in idx:
                        q[i] += delta * G[i, j]
                    beta[j] = new
            if _restricted_cd_gap(G, b, beta, q, idx, lam1, lam2) <= tol:
                break
        support = tuple(j for j in idx if beta[j] != 0.0)
        quad = sum(beta[j] * q[j] for j in idx)
        lin = sum(beta[j] * b[j] for j in idx)
        l1 = sum(abs(beta[j]) for j in idx)
        l2 = sum(beta[j] * beta[j] for j in idx)
        obj = 0.5 * (quad - 2.0 * lin + yty) + lam1 * l1 + lam2 * l2 + lam0 * len(support)
        evaluated += 1
        if obj < best_obj or (obj == best_obj and support < best_support):
            best_obj = obj
            best_support = support
            best_beta = np.zeros(p)
            best_beta[idx] = beta[idx]
    return best_obj, best_beta, evaluated
