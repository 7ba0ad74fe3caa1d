# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled phase kernels; see ``_kernels_py`` for the reference version."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


cdef inline double _dist(double[:, ::1] pos, Py_ssize_t a, Py_ssize_t b) nogil:
    cdef Py_ssize_t k
    cdef double s = 0.0, t
    for k in range(pos.shape[1]):
        t = pos[a, k] - pos[b, k]
        s += t * t
    return sqrt(s)


cdef inline double _clip(double v, double lo, double hi) nogil:
    if v < lo:
        v = lo
    if v > hi:
        v = hi
    return v


cdef void _accept(double[:, ::1] pos, double[::1] fit, cnp.int64_t[::1] ext,
                  Py_ssize_t i, double[::1] cand, double f) noexcept:
    cdef Py_ssize_t k, j, w
    cdef Py_ssize_t b = ext[0]
    for k in range(pos.shape[1]):
        pos[i, k] = cand[k]
    fit[i] = f
    if f < fit[b] or (f == fit[b] and i < b):
        ext[0] = i
    if i == ext[1]:
        w = 0
        for j in range(1, fit.shape[0]):
            if fit[j] > fit[w]:
                w = j
        ext[1] = w


def movement_phase(double[:, ::1] pos, double[::1] fit, cnp.int64_t[::1] ext,
                   double[::1] alpha, double[::1] sin_u, double[:, ::1] coin,
                   double[:, ::1] normal, double[:, ::1] frac,
                   double[::1] lower, double[::1] upper, double eps,
                   evaluate, Py_ssize_t limit):
    cdef Py_ssize_t n = pos.shape[0], d = pos.shape[1]
    cdef Py_ssize_t count = n if n < limit else limit
    cdef Py_ssize_t i, k, b
    cdef double radius, s, xi, xb, v, f
    cdef double[::1] cand
    for i in range(count):
        b = ext[0]
        radius = (_dist(pos, b, ext[1]) + eps) * alpha[i]
        cand_arr = np.empty(d)
        cand = cand_arr
        if _dist(pos, i, b) < radius:
            s = sin_u[i]
            for k in range(d):
                v = pos[i, k] + pos[b, k] * s
                cand[k] = _clip(v, lower[k], upper[k])
        else:
            for k in range(d):
                xi = pos[i, k]
                xb = pos[b, k]
                if coin[i, k] < 0.5:
                    v = xi + normal[i, k]
                else:
                    v = xi + (xb - xi) * frac[i, k]
                cand[k] = _clip(v, lower[k], upper[k])
        f = evaluate(cand_arr)
        if f < fit[i]:
            _accept(pos, fit, ext, i, cand, f)
    return count


def battle_phase(double[:, ::1] pos, double[::1] fit, cnp.int64_t[::1] ext,
                 cnp.int64_t[::1] opponent, double[::1] cos_u,
                 double[:, ::1] coin, double[:, ::1] frac,
                 double[::1] lower, double[::1] upper,
                 evaluate, Py_ssize_t limit):
    cdef Py_ssize_t n = pos.shape[0], d = pos.shape[1]
    cdef Py_ssize_t count = n if n < limit else limit
    cdef Py_ssize_t i, j, k
    cdef double fi, fj, c, v, step, dk, f
    cdef bint self_better, stronger
    cdef double[::1] cand
    for i in range(count):
        j = opponent[i]
        fi = fit[i]
        fj = fit[j]
        self_better = fi < fj
        stronger = fj < fi
        c = cos_u[i]
        cand_arr = np.empty(d)
        cand = cand_arr
        for k in range(d):
            if self_better:
                dk = pos[i, k] - pos[j, k]
            else:
                dk = pos[j, k] - pos[i, k]
            if stronger:
                step = frac[i, k] * dk
                if coin[i, k] < 0.5:
                    v = pos[i, k] + step
                else:
                    v = pos[j, k] + step
            else:
                v = pos[i, k] + dk * c
            cand[k] = _clip(v, lower[k], upper[k])
        f = evaluate(cand_arr)
        if f < fit[i]:
            _accept(pos, fit, ext, i, cand, f)
    return count
