# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled series kernel for the bivariate Bessel functions J_{a,0}(x, y).

Mirrors :mod:`kgoursat._fallback` term for term; the two must agree to
rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()

cdef double UNIT_ROUNDOFF = 1.1102230246251565e-16


cdef inline void _one(int a, double x, double y, double rel_tol, int max_terms,
                      double *value, double *err, int *status) noexcept nogil:
    cdef double xy = x * y
    cdef double t = 1.0
    cdef int k, j, n = 0, small = 0
    cdef double s = 0.0, comp = 0.0, tmp, absw = 0.0, ratio, nxt, tail
    cdef bint done = False
    for k in range(1, a + 1):
        t *= x / k
    for j in range(max_terms):
        # Neumaier-compensated accumulation
        tmp = s + t
        if fabs(s) >= fabs(t):
            comp += (s - tmp) + t
        else:
            comp += (t - tmp) + s
        s = tmp
        absw += fabs(t) * (4.0 * j + 2.0 * a + 2.0)
        n = j
        if fabs(t) < rel_tol * (fabs(s + comp) if fabs(s + comp) > 1.0 else 1.0):
            small += 1
        else:
            small = 0
        if small >= 3:
            done = True
            break
        t = t * (-xy) / ((j + 1.0) * (j + a + 1.0))
    s = s + comp
    if not done:
        status[0] = 1
    else:
        status[0] = 0
    if not done:
        tail = INFINITY
    elif xy == 0.0 or t == 0.0:
        tail = 0.0
    else:
        nxt = fabs(t) * fabs(xy) / ((n + 1.0) * (n + a + 1.0))
        ratio = fabs(xy) / ((n + 2.0) * (n + a + 2.0))
        if ratio < 1.0:
            tail = nxt / (1.0 - ratio)
        else:
            tail = INFINITY
    value[0] = s
    err[0] = tail + UNIT_ROUNDOFF * (absw + 2.0 * fabs(s))


def biv_bessel(int a, double[::1] x, double[::1] y, double rel_tol, int max_terms):
    """Evaluate J_{a,0} elementwise on contiguous float64 arrays.

    Returns ``(values, est_error, status)``; status 1 marks elements where
    ``max_terms`` ran out before the stop rule fired.
    """
    cdef Py_ssize_t i, m = x.shape[0]
    out = np.empty(m, dtype=np.float64)
    err = np.empty(m, dtype=np.float64)
    st = np.empty(m, dtype=np.intc)
    cdef double[::1] ov = out
    cdef double[::1] ev = err
    cdef int[::1] sv = st
    with nogil:
        for i in range(m):
            _one(a, x[i], y[i], rel_tol, max_terms, &ov[i], &ev[i], &sv[i])
    return out, err, st
