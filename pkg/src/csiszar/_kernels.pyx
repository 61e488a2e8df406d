# cython: language_level=3
"""Compiled hot loops: cyclic Jacobi eigensolver and compensated summation.

Semantics match ``csiszar._kernels_py`` exactly; the test-suite runs both.
"""
from libc.math cimport fabs, sqrt

import numpy as np


def kahan_sum(values):
    """Left-to-right Kahan summation of finite doubles."""
    cdef double[::1] x = np.ascontiguousarray(values, dtype=np.float64).ravel()
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double total = 0.0, comp = 0.0, y, t
    for i in range(n):
        y = x[i] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_sum_rows(values):
    """Row-wise :func:`kahan_sum` of a 2-d array."""
    cdef double[:, ::1] x = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t i, j, rows = x.shape[0], cols = x.shape[1]
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] o = out
    cdef double total, comp, y, t
    for i in range(rows):
        total = 0.0
        comp = 0.0
        for j in range(cols):
            y = x[i, j] - comp
            t = total + y
            comp = (t - total) - y
            total = t
        o[i] = total
    return out


cdef double _off_norm(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return sqrt(s)


def jacobi_eigh(matrix, double rel_tol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps, off_norm)`` with eigenvalues
    in the order they sit on the diagonal (unsorted) and eigenvectors as
    columns. ``off_norm`` is the final off-diagonal Frobenius norm.
    """
    cdef double[:, ::1] a = np.array(matrix, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    vecs = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] v = vecs
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double scale = 0.0, off, theta, t, c, s, app, aqq, apq, akp, akq
    for p in range(n):
        for q in range(n):
            scale += a[p, q] * a[p, q]
    scale = sqrt(scale)
    cdef double threshold = rel_tol * scale
    with nogil:
        off = _off_norm(a, n)
        while off > threshold and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if theta >= 0.0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(n):
                        akp = a[p, k]
                        akq = a[q, k]
                        a[p, k] = c * akp - s * akq
                        a[q, k] = s * akp + c * akq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * akq
                        v[k, q] = s * akp + c * akq
            sweep += 1
            off = _off_norm(a, n)
    diag = np.array([a[k, k] for k in range(n)], dtype=np.float64)
    return diag, vecs, sweep, off
