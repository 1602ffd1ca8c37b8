"""Riemann's explicit solution of the characteristic Goursat problem

    u_xy + u = 0,   u(x, 0) = f(x),   u(0, y) = g(y),   f(0) = g(0),

    u(x, y) = f(x) + g(y) - f(0) J_{0,0}(x, y)
              - int_0^x J_{0,1}(x - s, y) f(s) ds - int_0^y J_{1,0}(x, y - t) g(t) dt,

plus the unilateral splitting, Lorentz/Poincare pullbacks and the
finite-speed check built on it.
"""

import numpy as np

from .bessel import DEFAULT_SERIES, biv_bessel_array
from .boundary import BoundaryFunction, check_corner
from .errors import CompatibilityError, DomainError, SupportError
from .field import Field, FieldEvaluator
from .quadrature import DEFAULT_QUAD, QuadratureSpec, rules_from_zero

# elements per Bessel batch; bounds peak memory of the convolution sums
_CHUNK = 1 << 21

__all__ = [
    "QuadratureSpec",
    "RiemannSolution",
    "riemann_solve",
    "unilateral_horizontal",
    "split_solution",
    "lorentz_pullback",
    "finite_speed_check",
    "bessel_field",
]


def _convolution(h, limits, other, quad, series):
    """sum over rule nodes of J_{1,0}(other, limit - s) h(s) w(s), per point.

    With limits = x, other = y this is int_0^x J_{0,1}(x - s, y) f(s) ds;
    with limits = y, other = x it is int_0^y J_{1,0}(x, y - t) g(t) dt.
    Both reduce to J_{1,0}(other, limit - s) since J_{0,1}(u, v) = J_{1,0}(v, u).
    """
    nodes, weights, inv = rules_from_zero(limits, h.breakpoints, quad)
    hw = h(nodes) * weights
    out = np.zeros(limits.size, dtype=complex)
    k = nodes.shape[1]
    step = max(1, _CHUNK // k)
    for start in range(0, limits.size, step):
        sl = slice(start, start + step)
        rows = inv[sl]
        kern = biv_bessel_array(1, other[sl, None], limits[sl, None] - nodes[rows], series)
        out[sl] = np.sum(kern * hw[rows], axis=1)
    return out


class RiemannSolution:
    """Callable (x, y) -> R[f, g](x, y) on broadcast arrays.

    ``x_breaks``/``y_breaks`` list the kink lines inherited from the data,
    which quadrature over the solution should respect.
    """

    def __init__(self, f, g, quad=DEFAULT_QUAD, series=DEFAULT_SERIES):
        self.f0 = check_corner(f, g)
        self.f, self.g = f, g
        self.quad = quad
        self.series = series
        self.x_breaks = tuple(f.breakpoints)
        self.y_breaks = tuple(g.breakpoints)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        shape = x.shape
        X = x.ravel()
        Y = y.ravel()
        if X.size and np.max(np.abs(X * Y)) > 100.0:
            raise DomainError("solution requested outside the series domain |xy| <= 100")
        u = self.f(X) + self.g(Y)
        if self.f0 != 0:
            u = u - self.f0 * biv_bessel_array(0, X, Y, self.series)
        if self.f.kind != "zero":
            u = u - _convolution(self.f, X, Y, self.quad, self.series)
        if self.g.kind != "zero":
            u = u - _convolution(self.g, Y, X, self.quad, self.series)
        return u.reshape(shape)


def riemann_solve(f, g, grid, quad=DEFAULT_QUAD, series=DEFAULT_SERIES):
    """Field of R[f, g] on ``grid``; the field keeps the solution as its sampler."""
    sol = RiemannSolution(f, g, quad, series)
    X, Y = grid.mesh()
    return Field(grid, sol(X, Y), meta=f"riemann f={f!r} g={g!r}", sampler=sol)


def unilateral_horizontal(f, grid, quad=DEFAULT_QUAD, series=DEFAULT_SERIES):
    """R[f, 0] for data with f(0) = 0: the wave vanishing on the vertical axis."""
    f0 = f.at(0.0)
    if abs(f0) > f.corner_tol:
        raise CompatibilityError(f"horizontal unilateral wave needs f(0) = 0, got {f0:.17g}")
    return riemann_solve(f, BoundaryFunction.zero(), grid, quad, series)


def bessel_field(grid, scale=1.0, series=DEFAULT_SERIES):
    """scale * J_{0,0} sampled on ``grid``."""
    sampler = _ScaledJ00(scale, series)
    X, Y = grid.mesh()
    return Field(grid, sampler(X, Y), meta=f"{scale}*J00", sampler=sampler)


class _ScaledJ00:
    x_breaks = ()
    y_breaks = ()

    def __init__(self, scale, series=DEFAULT_SERIES):
        self.scale = complex(scale)
        self.series = series

    def __call__(self, x, y):
        return self.scale * biv_bessel_array(0, x, y, self.series)


def split_solution(f, g, grid, quad=DEFAULT_QUAD, series=DEFAULT_SERIES):
    """(u0, u_horz, u_vert) with u0 = f(0) J_{0,0}, u_horz = R[f - f(0), 0],
    u_vert = R[0, g - g(0)]; they sum to R[f, g]."""
    f0 = check_corner(f, g)
    zero = BoundaryFunction.zero()
    u0 = bessel_field(grid, f0, series)
    uh = riemann_solve(f.centered(), zero, grid, quad, series)
    uv = riemann_solve(zero, g.centered(), grid, quad, series)
    return u0, uh, uv


class Pullback:
    """v(x, y) = u(lam x + a, y / lam + b), or with ``swap``
    w(x, y) = u(lam y + a, x / lam + b)."""

    def __init__(self, u, lam, a=0.0, b=0.0, swap=False):
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        self.source = FieldEvaluator(u) if isinstance(u, Field) else u
        self.lam, self.a, self.b, self.swap = float(lam), float(a), float(b), bool(swap)
        ux = tuple(getattr(self.source, "x_breaks", ()))
        uy = tuple(getattr(self.source, "y_breaks", ()))
        to_x = tuple((p - self.a) / self.lam for p in ux)
        to_y = tuple(self.lam * (p - self.b) for p in uy)
        if self.swap:
            # source x-kinks sit at lam*y + a = p, source y-kinks at x/lam + b = p
            self.x_breaks, self.y_breaks = to_y, to_x
        else:
            self.x_breaks, self.y_breaks = to_x, to_y

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.swap:
            return self.source(self.lam * y + self.a, x / self.lam + self.b)
        return self.source(self.lam * x + self.a, y / self.lam + self.b)


def lorentz_pullback(u, lam, a=0.0, b=0.0, swap=False):
    """Compose a solution (callable or Field) with a Poincare map.

    Fields are sampled through their exact sampler when they have one and by
    bilinear interpolation otherwise; requests outside the field's grid raise
    DomainError.
    """
    return Pullback(u, lam, a, b, swap)


def _assert_vanishes(h, lo, hi, name, samples=2001, tol=1e-14):
    if hi <= lo:
        ts = np.array([lo])
    else:
        ts = np.union1d(np.linspace(lo, hi, samples), [p for p in h.breakpoints if lo <= p <= hi])
    vals = np.abs(h(ts))
    bad = np.nonzero(vals > tol)[0]
    if bad.size:
        t = ts[bad[0]]
        raise SupportError(f"{name} does not vanish on [{lo:g}, {hi:g}]: |{name}({t:.6g})| = {vals[bad[0]]:.3g}")


def finite_speed_check(f, g, rect, grid, quad=DEFAULT_QUAD, series=DEFAULT_SERIES):
    """max |R[f, g]| over grid nodes inside rect = (a, a', b, b').

    The data must vanish on [a, a'] and [b, b'] respectively; the returned
    maximum should then sit at rounding level.
    """
    a, a2, b, b2 = (float(v) for v in rect)
    if not (a <= 0 <= a2 and b <= 0 <= b2):
        raise ValueError("rectangle must satisfy a <= 0 <= a' and b <= 0 <= b'")
    _assert_vanishes(f, a, a2, "f")
    _assert_vanishes(g, b, b2, "g")
    sol = RiemannSolution(f, g, quad, series)
    X, Y = grid.mesh()
    inside = (X >= a) & (X <= a2) & (Y >= b) & (Y <= b2)
    if not np.any(inside):
        return 0.0
    return float(np.max(np.abs(sol(X[inside], Y[inside]))))
