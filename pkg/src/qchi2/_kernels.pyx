# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels; see ``_kernels_py`` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, log, log1p, exp

cnp.import_array()

cdef enum:
    FAMILY_RUSKAI = 1
    FAMILY_WYD = 2
    FAMILY_MIN = 3
    FAMILY_MAX = 4


def mc_kernel(int code, double alpha, lam):
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef Py_ssize_t n = lv.shape[0]
    cdef Py_ssize_t i, j
    cdef double x, y, v, e = 2.0 * alpha - 1.0
    if code < FAMILY_RUSKAI or code > FAMILY_MAX:
        raise ValueError(f"no closed-form kernel for family code {code}")
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] c = out
    # per-eigenvalue powers: x^(alpha - 1) and x^(-alpha)
    cdef double[::1] pa = np.empty(n, dtype=np.float64)
    cdef double[::1] pb = np.empty(n, dtype=np.float64)
    for i in range(n):
        pa[i] = pow(lv[i], alpha - 1.0)
        pb[i] = pow(lv[i], -alpha)
    for i in range(n):
        x = lv[i]
        for j in range(i, n):
            y = lv[j]
            if code == FAMILY_RUSKAI:
                v = 0.5 * (pa[i] * pb[j] + pb[i] * pa[j])
            elif code == FAMILY_WYD:
                v = pb[i] * pb[j] * pow(0.5 * (x + y), e)
            elif code == FAMILY_MIN:
                v = (x + y) / (2.0 * x * y)
            else:
                v = 2.0 / (x + y)
            c[i, j] = v
            c[j, i] = v
    return out


def hadamard_quadform(c, x):
    cdef const double[:, :] cv = np.asarray(c, dtype=np.float64)
    cdef const double complex[:, :] xv = np.asarray(x, dtype=np.complex128)
    cdef Py_ssize_t n = cv.shape[0], m = cv.shape[1]
    cdef Py_ssize_t i, j
    cdef double total = 0.0
    cdef double complex z
    for i in range(n):
        for j in range(m):
            z = xv[i, j]
            total += cv[i, j] * (z.real * z.real + z.imag * z.imag)
    return total


def weight_log_nodes(t, nodes, weights):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t m = tv.shape[0], q = xv.shape[0]
    cdef Py_ssize_t i, k
    cdef double ti, s, a, b, half, mid, l, kern
    lam_arr = np.empty((m, q), dtype=np.float64)
    kw_arr = np.empty((m, q), dtype=np.float64)
    cdef double[:, ::1] lam = lam_arr
    cdef double[:, ::1] kw = kw_arr
    for i in range(m):
        ti = tv[i]
        s = ti if ti < 1.0 / ti else 1.0 / ti
        a = log(s)
        b = log1p(s)
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        for k in range(q):
            l = exp(half * xv[k] + mid) - s
            if l < 0.0:
                l = 0.0
            elif l > 1.0:
                l = 1.0
            kern = ((1.0 - l * l) * (1.0 - ti) * (1.0 - ti)
                    / ((l + ti) * (1.0 + l * ti) * (1.0 + l) * (1.0 + l)))
            lam[i, k] = l
            kw[i, k] = kern * half * wv[k] * (l + s)
    return lam_arr, kw_arr


def divided_differences(t, ft, dft):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef const double[::1] fv = np.ascontiguousarray(ft, dtype=np.float64)
    cdef const double[::1] dv = np.ascontiguousarray(dft, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t i, j
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] L = out
    for i in range(n):
        L[i, i] = dv[i]
        for j in range(i + 1, n):
            L[i, j] = (fv[i] - fv[j]) / (tv[i] - tv[j])
            L[j, i] = L[i, j]
    return out
