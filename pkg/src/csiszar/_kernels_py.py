"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Plain lists of floats are used on purpose: for the n <= 64 matrices this
package handles, per-element list access beats numpy's per-call overhead.
"""
import math

import numpy as np


def kahan_sum(values):
    """Left-to-right Kahan summation of finite doubles."""
    total = 0.0
    comp = 0.0
    for v in np.asarray(values, dtype=np.float64).ravel().tolist():
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_sum_rows(values):
    """Row-wise :func:`kahan_sum` of a 2-d array."""
    rows = np.asarray(values, dtype=np.float64)
    return np.array([kahan_sum(row) for row in rows], dtype=np.float64)


def _off_norm(a, n):
    s = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                s += row[j] * row[j]
    return math.sqrt(s)


def jacobi_eigh(matrix, rel_tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi rotations on a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps, off_norm)``; see the
    compiled version for the contract.
    """
    a = np.array(matrix, dtype=np.float64).tolist()
    n = len(a)
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    scale = math.sqrt(sum(x * x for row in a for x in row))
    threshold = rel_tol * scale
    sweep = 0
    off = _off_norm(a, n)
    while off > threshold and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    row = a[k]
                    akp = row[p]
                    akq = row[q]
                    row[p] = c * akp - s * akq
                    row[q] = s * akp + c * akq
                rp = a[p]
                rq = a[q]
                for k in range(n):
                    akp = rp[k]
                    akq = rq[k]
                    rp[k] = c * akp - s * akq
                    rq[k] = s * akp + c * akq
                rp[q] = 0.0
                rq[p] = 0.0
                for k in range(n):
                    row = v[k]
                    akp = row[p]
                    akq = row[q]
                    row[p] = c * akp - s * akq
                    row[q] = s * akp + c * akq
        sweep += 1
        off = _off_norm(a, n)
    diag = np.array([a[k][k] for k in range(n)], dtype=np.float64)
    return diag, np.array(v, dtype=np.float64).reshape(n, n), sweep, off
