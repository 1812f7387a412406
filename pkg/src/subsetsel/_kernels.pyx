# Compiled twins of subsetsel._kernels_py; see that module for the contracts.
from libc.math cimport sqrt, fabs, copysign

import numpy as np

BACKEND = "cython"


def cd_sweep_inplace(double[::1, :] X, double[::1] resid, double[::1] beta,
                     double[::1] col_sq, long long[::1] active_idx,
                     double lam0, double lam1, double lam2):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t m = active_idx.shape[0]
    cdef Py_ssize_t i, k, j
    cdef int changed = 0
    cdef double d, denom, bt, mag, cand, new, old, delta
    with nogil:
        for k in range(m):
            j = <Py_ssize_t> active_idx[k]
            d = col_sq[j]
            denom = d + 2.0 * lam2
            bt = beta[j] * d
            for i in range(n):
                bt += X[i, j] * resid[i]
            mag = fabs(bt) - lam1
            new = 0.0
            if mag > 0.0:
                cand = mag / denom
                if cand >= sqrt(2.0 * lam0 / denom):
                    new = copysign(cand, bt)
            old = beta[j]
            if new != old:
                delta = old - new
                for i in range(n):
                    resid[i] += delta * X[i, j]
                beta[j] = new
                changed += 1
    return changed


cdef double _restricted_cd_gap(double[:, ::1] G, double[::1] b, double[::1] beta,
                               double[::1] q, long long[::1] idx, Py_ssize_t m,
                               double lam1, double lam2) nogil:
    cdef double quad = 0.0, lin = 0.0, l1 = 0.0, l2 = 0.0, conj = 0.0
    cdef double bj, corr
    cdef Py_ssize_t k, j
    for k in range(m):
        j = <Py_ssize_t> idx[k]
        bj = beta[j]
        quad += bj * q[j]
        lin += bj * b[j]
        l1 += fabs(bj)
        l2 += bj * bj
        corr = fabs(q[j] - b[j]) - lam1
        if corr > 0.0:
            conj += corr * corr
    return quad - lin + lam1 * l1 + lam2 * l2 + conj / (4.0 * lam2)


cdef int _lex_smaller(double[::1] beta, long long[::1] idx, Py_ssize_t m,
                      long long best_mask, Py_ssize_t p) nogil:
    # True when the candidate's effective support precedes the incumbent's
    # in ascending-index lexicographic order (a strict prefix also wins).
    cdef Py_ssize_t ia = 0, ib = 0
    cdef long long ja, jb
    while True:
        ja = -1
        while ia < m:
            if beta[<Py_ssize_t> idx[ia]] != 0.0:
                ja = idx[ia]
                ia += 1
                break
            ia += 1
        jb = -1
        while ib < p:
            if best_mask >> ib & 1:
                jb = ib
                ib += 1
                break
            ib += 1
        if ja == -1 and jb == -1:
            return 0
        if ja == -1:
            return 1
        if jb == -1:
            return 0
        if ja < jb:
            return 1
        if ja > jb:
            return 0


def oracle_enumerate(double[:, ::1] G, double[::1] b, double yty,
                     double lam0, double lam1, double lam2,
                     double tol, int max_sweeps):
    cdef Py_ssize_t p = b.shape[0]
    cdef double[::1] beta = np.zeros(p)
    cdef double[::1] q = np.zeros(p)
    cdef long long[::1] idx = np.zeros(p, dtype=np.int64)
    best_beta = np.zeros(p)
    cdef double[::1] best_view = best_beta
    cdef double best_obj = 0.5 * yty
    cdef long long best_mask = 0
    cdef unsigned long long mask, total = 1ULL << p
    cdef long long evaluated = 1
    cdef Py_ssize_t m, k, j, i
    cdef int sweep, nnz, take
    cdef double d, bt, mag, new, delta, quad, lin, l1, l2, obj, bj

    for mask in range(1, total):
        m = 0
        for j in range(p):
            if mask >> j & 1:
                idx[m] = j
                m += 1
                beta[j] = 0.0
                q[j] = 0.0
        with nogil:
            for sweep in range(max_sweeps):
                for k in range(m):
                    j = <Py_ssize_t> idx[k]
                    d = G[j, j]
                    bt = b[j] - q[j] + beta[j] * d
                    mag = fabs(bt) - lam1
                    new = copysign(mag, bt) / (d + 2.0 * lam2) if mag > 0.0 else 0.0
                    delta = new - beta[j]
                    if delta != 0.0:
                        for i in range(m):
                            q[<Py_ssize_t> idx[i]] += delta * G[<Py_ssize_t> idx[i], j]
                        beta[j] = new
                if _restricted_cd_gap(G, b, beta, q, idx, m, lam1, lam2) <= tol:
                    break
        nnz = 0
        quad = 0.0
        lin = 0.0
        l1 = 0.0
        l2 = 0.0
        for k in range(m):
            j = <Py_ssize_t> idx[k]
            bj = beta[j]
            if bj != 0.0:
                nnz += 1
            quad += bj * q[j]
            lin += bj * b[j]
            l1 += fabs(bj)
            l2 += bj * bj
        obj = 0.5 * (quad - 2.0 * lin + yty) + lam1 * l1 + lam2 * l2 + lam0 * nnz
        evaluated += 1
        take = 0
        if obj < best_obj:
            take = 1
        elif obj == best_obj:
            take = _lex_smaller(beta, idx, m, best_mask, p)
        if take:
            best_obj = obj
            best_mask = 0
            for j in range(p):
                best_view[j] = 0.0
            for k in range(m):
                j = <Py_ssize_t> idx[k]
                best_view[j] = beta[j]
                if beta[j] != 0.0:
                    best_mask |= 1LL << j
    return best_obj, best_beta, evaluated
