"""Pure numpy implementation of the series kernel.

Used when the compiled extension is unavailable or ``KGOURSAT_PURE=1``.
Follows ``_kernels.pyx`` step for step, vectorised over elements: each
element freezes once its own stop rule fires.
"""

import numpy as np

UNIT_ROUNDOFF = 2.0 ** -53


def biv_bessel(a, x, y, rel_tol, max_terms):
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    m = x.shape[0]
    xy = x * y
    t = np.ones(m)
    for k in range(1, a + 1):
        t *= x / k

    s = np.zeros(m)
    comp = np.zeros(m)
    absw = np.zeros(m)
    small = np.zeros(m, dtype=np.intc)
    last_n = np.zeros(m)
    last_t = np.zeros(m)
    done = np.zeros(m, dtype=bool)
    active = np.arange(m)

    for j in range(max_terms):
        if active.size == 0:
            break
        ta = t[active]
        sa = s[active]
        tmp = sa + ta
        big_s = np.abs(sa) >= np.abs(ta)
        comp[active] += np.where(big_s, (sa - tmp) + ta, (ta - tmp) + sa)
        s[active] = tmp
        absw[active] += np.abs(ta) * (4.0 * j + 2.0 * a + 2.0)

        scale = np.maximum(np.abs(tmp + comp[active]), 1.0)
        is_small = np.abs(ta) < rel_tol * scale
        small[active] = np.where(is_small, small[active] + 1, 0)

        fin = small[active] >= 3
        if fin.any():
            idx = active[fin]
            done[idx] = True
            last_n[idx] = j
            last_t[idx] = ta[fin]
        keep = active[~fin]
        t[keep] = t[keep] * (-xy[keep]) / ((j + 1.0) * (j + a + 1.0))
        active = keep

    s = s + comp
    status = np.where(done, 0, 1).astype(np.intc)

    axy = np.abs(xy)
    n = last_n
    with np.errstate(divide="ignore", invalid="ignore"):
        nxt = np.abs(last_t) * axy / ((n + 1.0) * (n + a + 1.0))
        ratio = axy / ((n + 2.0) * (n + a + 2.0))
        tail = np.where(ratio < 1.0, nxt / (1.0 - ratio), np.inf)
    tail = np.where((xy == 0.0) | (last_t == 0.0), 0.0, tail)
    tail = np.where(done, tail, np.inf)
    err = tail + UNIT_ROUNDOFF * (absw + 2.0 * np.abs(s))
    return s, err, status
