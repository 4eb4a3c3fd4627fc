# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled embedding hot kernels; mirrors litkg.backends.numpy_backend.

All inner loops release the GIL, so threads running sgd_step concurrently
interleave their unsynchronized updates (lock-free parallel mode).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log, sqrt

cnp.import_array()

cdef enum ModelCode:
    M_TRANSE_L1 = 0
    M_TRANSE_L2 = 1
    M_DISTMULT = 2
    M_COMPLEX = 3

TRANSE_L1, TRANSE_L2, DISTMULT, COMPLEX = 0, 1, 2, 3

name = "c"
compiled = True

ctypedef cnp.int64_t idx_t


cdef inline double _softplus(double x) nogil:
    # log(1 + e^x) without overflow; linear asymptote for large x
    if x > 36.0:
        return x
    if x < -36.0:
        return exp(x)
    return log(1.0 + exp(x))


cdef inline double _sigmoid_neg(double m) nogil:
    # sigma(-m) = 1 / (1 + e^m)
    cdef double e
    if m >= 0.0:
        e = exp(-m)
        return e / (1.0 + e)
    return 1.0 / (1.0 + exp(m))


cdef double _score_row(const double[:, ::1] ent, const double[:, ::1] rel,
                       Py_ssize_t h, Py_ssize_t r, Py_ssize_t t,
                       int code, Py_ssize_t D) nogil:
    cdef Py_ssize_t j, d
    cdef double f = 0.0
    cdef double u, hre, him, rre, rim, tre, tim
    if code == M_TRANSE_L1:
        for j in range(D):
            u = ent[h, j] + rel[r, j] - ent[t, j]
            f += fabs(u)
        return -f
    elif code == M_TRANSE_L2:
        for j in range(D):
            u = ent[h, j] + rel[r, j] - ent[t, j]
            f += u * u
        return -sqrt(f)
    elif code == M_DISTMULT:
        for j in range(D):
            f += ent[h, j] * rel[r, j] * ent[t, j]
        return f
    else:
        d = D // 2
        for j in range(d):
            hre = ent[h, j]
            him = ent[h, d + j]
            rre = rel[r, j]
            rim = rel[r, d + j]
            tre = ent[t, j]
            tim = ent[t, d + j]
            f += rre * (hre * tre + him * tim) + rim * (hre * tim - him * tre)
        return f


cdef double _grad_row(const double[:, ::1] ent, const double[:, ::1] rel,
                      Py_ssize_t h, Py_ssize_t r, Py_ssize_t t, double y,
                      int code, Py_ssize_t D, Py_ssize_t b,
                      double[:, ::1] gh, double[:, ::1] gr, double[:, ::1] gt) nogil:
    """Fill per-example gradient rows b of gh/gr/gt; return the example loss."""
    cdef Py_ssize_t j, d
    cdef double f, m, coef, u, nrm, s
    cdef double hre, him, rre, rim, tre, tim
    if code == M_TRANSE_L1:
        f = 0.0
        for j in range(D):
            f += fabs(ent[h, j] + rel[r, j] - ent[t, j])
        f = -f
        m = y * f
        coef = -y * _sigmoid_neg(m)
        for j in range(D):
            u = ent[h, j] + rel[r, j] - ent[t, j]
            s = 0.0
            if u > 0.0:
                s = -1.0
            elif u < 0.0:
                s = 1.0
            gh[b, j] = coef * s
            gr[b, j] = coef * s
            gt[b, j] = -coef * s
        return _softplus(-m)
    elif code == M_TRANSE_L2:
        nrm = 0.0
        for j in range(D):
            u = ent[h, j] + rel[r, j] - ent[t, j]
            nrm += u * u
        nrm = sqrt(nrm)
        f = -nrm
        m = y * f
        coef = -y * _sigmoid_neg(m)
        if nrm > 0.0:
            for j in range(D):
                u = ent[h, j] + rel[r, j] - ent[t, j]
                s = -u / nrm
                gh[b, j] = coef * s
                gr[b, j] = coef * s
                gt[b, j] = -coef * s
        else:
            for j in range(D):
                gh[b, j] = 0.0
                gr[b, j] = 0.0
                gt[b, j] = 0.0
        return _softplus(-m)
    elif code == M_DISTMULT:
        f = 0.0
        for j in range(D):
            f += ent[h, j] * rel[r, j] * ent[t, j]
        m = y * f
        coef = -y * _sigmoid_neg(m)
        for j in range(D):
            gh[b, j] = coef * rel[r, j] * ent[t, j]
            gr[b, j] = coef * ent[h, j] * ent[t, j]
            gt[b, j] = coef * ent[h, j] * rel[r, j]
        return _softplus(-m)
    else:
        d = D // 2
        f = 0.0
        for j in range(d):
            hre = ent[h, j]
            him = ent[h, d + j]
            rre = rel[r, j]
            rim = rel[r, d + j]
            tre = ent[t, j]
            tim = ent[t, d + j]
            f += rre * (hre * tre + him * tim) + rim * (hre * tim - him * tre)
        m = y * f
        coef = -y * _sigmoid_neg(m)
        for j in range(d):
            hre = ent[h, j]
            him = ent[h, d + j]
            rre = rel[r, j]
            rim = rel[r, d + j]
            tre = ent[t, j]
            tim = ent[t, d + j]
            gh[b, j] = coef * (rre * tre + rim * tim)
            gh[b, d + j] = coef * (rre * tim - rim * tre)
            gr[b, j] = coef * (hre * tre + him * tim)
            gr[b, d + j] = coef * (hre * tim - him * tre)
            gt[b, j] = coef * (rre * hre - rim * him)
            gt[b, d + j] = coef * (rre * him + rim * hre)
        return _softplus(-m)


def score_batch(const double[:, ::1] ent, const double[:, ::1] rel,
                idx_t[::1] h, idx_t[::1] r, idx_t[::1] t, int code):
    """Elementwise plausibility scores for index triples; higher is better."""
    cdef Py_ssize_t B = h.shape[0]
    cdef Py_ssize_t D = ent.shape[1]
    out_arr = np.empty(B, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t b
    with nogil:
        for b in range(B):
            out[b] = _score_row(ent, rel, h[b], r[b], t[b], code, D)
    return out_arr


def loss_and_grad(const double[:, ::1] ent, const double[:, ::1] rel,
                  idx_t[::1] h, idx_t[::1] r, idx_t[::1] t,
                  double[::1] y, int code):
    """Summed logistic loss and exact per-example gradient rows."""
    cdef Py_ssize_t B = h.shape[0]
    cdef Py_ssize_t D = ent.shape[1]
    gh_arr = np.empty((B, D), dtype=np.float64)
    gr_arr = np.empty((B, D), dtype=np.float64)
    gt_arr = np.empty((B, D), dtype=np.float64)
    cdef double[:, ::1] gh = gh_arr
    cdef double[:, ::1] gr = gr_arr
    cdef double[:, ::1] gt = gt_arr
    cdef double total = 0.0
    cdef Py_ssize_t b
    with nogil:
        for b in range(B):
            total += _grad_row(ent, rel, h[b], r[b], t[b], y[b], code, D, b, gh, gr, gt)
    return total, gh_arr, gr_arr, gt_arr


def sgd_step(double[:, ::1] ent, double[:, ::1] rel,
             idx_t[::1] h, idx_t[::1] r, idx_t[::1] t,
             double[::1] y, double lr, int code):
    """One plain-SGD update in place; returns the summed batch loss.

    Gradients are taken against the embeddings as of batch start, then
    applied; repeated indices within a batch accumulate.
    """
    cdef Py_ssize_t B = h.shape[0]
    cdef Py_ssize_t D = ent.shape[1]
    gh_arr = np.empty((B, D), dtype=np.float64)
    gr_arr = np.empty((B, D), dtype=np.float64)
    gt_arr = np.empty((B, D), dtype=np.float64)
    cdef double[:, ::1] gh = gh_arr
    cdef double[:, ::1] gr = gr_arr
    cdef double[:, ::1] gt = gt_arr
    cdef double total = 0.0
    cdef Py_ssize_t b, j
    with nogil:
        for b in range(B):
            total += _grad_row(ent, rel, h[b], r[b], t[b], y[b], code, D, b, gh, gr, gt)
        for b in range(B):
            for j in range(D):
                ent[h[b], j] -= lr * gh[b, j]
                rel[r[b], j] -= lr * gr[b, j]
                ent[t[b], j] -= lr * gt[b, j]
    return total


def renorm_rows(double[:, ::1] ent, idx_t[::1] rows):
    """Project the given entity rows onto the unit L2 sphere in place."""
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t D = ent.shape[1]
    cdef Py_ssize_t i, j
    cdef double s
    with nogil:
        for i in range(n):
            s = 0.0
            for j in range(D):
                s += ent[rows[i], j] * ent[rows[i], j]
            if s > 0.0:
                s = 1.0 / sqrt(s)
                for j in range(D):
                    ent[rows[i], j] *= s


def score_tails(const double[:, ::1] ent, const double[:, ::1] rel,
                Py_ssize_t h, Py_ssize_t r, int code):
    """Scores of (h, r, e) for every entity e."""
    cdef Py_ssize_t nE = ent.shape[0]
    cdef Py_ssize_t D = ent.shape[1]
    cdef Py_ssize_t d = D // 2
    out_arr = np.empty(nE, dtype=np.float64)
    cdef double[::1] out = out_arr
    q_arr = np.empty(D, dtype=np.float64)
    cdef double[::1] q = q_arr
    cdef Py_ssize_t e, j
    cdef double acc, u
    if code == M_TRANSE_L1 or code == M_TRANSE_L2:
        with nogil:
            for j in range(D):
                q[j] = ent[h, j] + rel[r, j]
            for e in range(nE):
                acc = 0.0
                if code == M_TRANSE_L1:
                    for j in range(D):
                        acc += fabs(q[j] - ent[e, j])
                    out[e] = -acc
                else:
                    for j in range(D):
                        u = q[j] - ent[e, j]
                        acc += u * u
                    out[e] = -sqrt(acc)
        return out_arr
    if code == M_DISTMULT:
        with nogil:
            for j in range(D):
                q[j] = ent[h, j] * rel[r, j]
            for e in range(nE):
                acc = 0.0
                for j in range(D):
                    acc += ent[e, j] * q[j]
                out[e] = acc
        return out_arr
    # complex: q holds the real-half weights, then the imaginary-half weights
    with nogil:
        for j in range(d):
            q[j] = rel[r, j] * ent[h, j] - rel[r, d + j] * ent[h, d + j]
            q[d + j] = rel[r, j] * ent[h, d + j] + rel[r, d + j] * ent[h, j]
        for e in range(nE):
            acc = 0.0
            for j in range(D):
                acc += ent[e, j] * q[j]
            out[e] = acc
    return out_arr


def score_heads(const double[:, ::1] ent, const double[:, ::1] rel,
                Py_ssize_t r, Py_ssize_t t, int code):
    """Scores of (e, r, t) for every entity e."""
    cdef Py_ssize_t nE = ent.shape[0]
    cdef Py_ssize_t D = ent.shape[1]
    cdef Py_ssize_t d = D // 2
    out_arr = np.empty(nE, dtype=np.float64)
    cdef double[::1] out = out_arr
    q_arr = np.empty(D, dtype=np.float64)
    cdef double[::1] q = q_arr
    cdef Py_ssize_t e, j
    cdef double acc, u
    if code == M_TRANSE_L1 or code == M_TRANSE_L2:
        with nogil:
            for j in range(D):
                q[j] = ent[t, j] - rel[r, j]
            for e in range(nE):
                acc = 0.0
                if code == M_TRANSE_L1:
                    for j in range(D):
                        acc += fabs(ent[e, j] - q[j])
                    out[e] = -acc
                else:
                    for j in range(D):
                        u = ent[e, j] - q[j]
                        acc += u * u
                    out[e] = -sqrt(acc)
        return out_arr
    if code == M_DISTMULT:
        with nogil:
            for j in range(D):
                q[j] = rel[r, j] * ent[t, j]
            for e in range(nE):
                acc = 0.0
                for j in range(D):
                    acc += ent[e, j] * q[j]
                out[e] = acc
        return out_arr
    with nogil:
        for j in range(d):
            q[j] = rel[r, j] * ent[t, j] + rel[r, d + j] * ent[t, d + j]
            q[d + j] = rel[r, j] * ent[t, d + j] - rel[r, d + j] * ent[t, j]
        for e in range(nE):
            acc = 0.0
            for j in range(D):
                acc += ent[e, j] * q[j]
            out[e] = acc
    return out_arr
