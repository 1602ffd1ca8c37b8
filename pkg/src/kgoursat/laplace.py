"""Laplace transform of boundary data and of horizontal solution slices.

The transform L[f](zeta) = int_0^inf exp(-x zeta) f(x) dx is truncated at
X_max and evaluated by composite Gauss-Legendre. Growth metadata on the
datum turns the neglected tail into a rigorous bound. For a horizontal
unilateral wave u = R[f, 0] each slice obeys the evolution law

    L[u(., y)](zeta) = exp(-y / zeta) L[f](zeta).
"""

import math
from dataclasses import dataclass

import numpy as np

from .analysis import lemma_bound
from .bessel import DEFAULT_SERIES
from .boundary import BoundaryFunction
from .errors import AbscissaError, DomainError, MetadataError
from .quadrature import DEFAULT_QUAD, composite_rule
from .riemann import RiemannSolution

EPS_FLOOR = 1e-300
TAIL_TARGET = 1e-12


@dataclass(frozen=True)
class LaplaceEvaluation:
    zeta: complex
    value: complex
    tail_bound: float
    x_max: float = math.nan


@dataclass(frozen=True)
class GrowthSpec:
    """Growth exponents of a pair of boundary data, |f| <~ exp(theta1 x^q),
    |g| <~ exp(theta2 |y|^q)."""

    q: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not 0 < self.q <= 1:
            raise DomainError("q must lie in (0, 1]")
        if not (self.theta1 > 0 and self.theta2 > 0):
            raise DomainError("theta1 and theta2 must be positive")

    @property
    def qpp(self):
        """q'' = q / (2q - 1), defined for q > 1/2."""
        if self.q <= 0.5:
            return None
        return self.q / (2 * self.q - 1)


def tail_bound(growth, sigma, x_max):
    """Bound on int_{x_max}^inf |exp(-x zeta) f(x)| dx for Re zeta = sigma."""
    C, theta, q = growth.constant, growth.theta, growth.q
    if C == 0:
        return 0.0
    if theta == 0 or q == 1:
        if sigma <= theta:
            raise AbscissaError(f"Re zeta = {sigma:g} does not exceed the growth rate {theta:g}")
        return C * math.exp((theta - sigma) * x_max) / (sigma - theta)
    if sigma <= 0:
        raise AbscissaError("Re zeta must be positive")
    # theta x^q lies under its tangent at x_max, which gives a geometric tail
    slope = theta * q * x_max ** (q - 1)
    if sigma > slope:
        return C * math.exp(theta * x_max**q - sigma * x_max) / (sigma - slope)
    return C * lemma_bound(q, theta, sigma)


def default_x_max(growth, sigma, target=TAIL_TARGET):
    """Smallest X (to 1%) with tail_bound <= target; AbscissaError if none."""
    if tail_bound(growth, sigma, 0.0) <= target:
        return 1.0
    lo, hi = 0.0, 1.0
    while tail_bound(growth, sigma, hi) > target:
        lo, hi = hi, 2 * hi
        if hi > 1e8:
            raise AbscissaError("no truncation point reaches the tail target")
    while hi - lo > 0.01 * hi:
        mid = 0.5 * (lo + hi)
        if tail_bound(growth, sigma, mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def laplace(f, zeta, X_max=None, quad=DEFAULT_QUAD, with_tail=True):
    """Truncated Laplace transform of ``f`` at ``zeta``.

    With ``X_max=None`` the truncation point is chosen from f's growth
    metadata so the tail bound is at most 1e-12.
    """
    zeta = complex(zeta)
    sigma = zeta.real
    if not sigma > 0:
        raise AbscissaError("Re zeta must be positive")
    growth = getattr(f, "growth", None)
    if (with_tail or X_max is None) and growth is None:
        raise MetadataError("tail bound needs growth metadata on the datum")
    if X_max is None:
        X_max = default_x_max(growth, sigma)
    if not X_max > 0:
        raise ValueError("X_max must be positive")
    tail = tail_bound(growth, sigma, X_max) if with_tail else math.nan
    nodes, weights = composite_rule(0.0, float(X_max), getattr(f, "breakpoints", ()), quad)
    vals = np.asarray(f(nodes), dtype=complex)
    integrand = np.exp(-nodes * zeta) * vals
    # real and imaginary parts are separate real quadratures
    value = complex(weights @ integrand.real, weights @ integrand.imag)
    return LaplaceEvaluation(zeta, value, tail, float(X_max))


def slice_transform(u, y, zeta, X_max, quad=DEFAULT_QUAD, x_breaks=()):
    """int_0^X_max exp(-x zeta) u(x, y) dx for a callable solution u."""
    nodes, weights = composite_rule(0.0, float(X_max), x_breaks, quad)
    vals = np.asarray(u(nodes, np.full(nodes.shape, float(y))), dtype=complex)
    return weights @ (np.exp(-nodes * complex(zeta)) * vals)


def evolution_table(f, grid, quad=DEFAULT_QUAD, zetas=(1, 2, 1 + 1j), ys=(0.0, -0.5, -1.0), X_max=None,
                    series=DEFAULT_SERIES):
    """Rows (zeta, y, lhs, rhs, deviation) comparing both sides of the
    evolution law for u = R[f - f(0), 0]."""
    if X_max is None:
        X_max = float(grid.xs[-1])
    if not X_max > 0:
        raise DomainError("the grid must extend to positive x")
    for y in ys:
        if not grid.ys[0] <= y <= grid.ys[-1]:
            raise DomainError(f"y = {y:g} lies outside the grid")
    zetas = [complex(z) for z in zetas]
    if any(z.real <= 0 for z in zetas):
        raise AbscissaError("Re zeta must be positive")
    h = f.centered()
    sol = RiemannSolution(h, BoundaryFunction.zero(), quad, series)
    nodes, weights = composite_rule(0.0, X_max, h.breakpoints, quad)
    rows = []
    slices = {}
    for y in ys:
        slices[y] = np.asarray(sol(nodes, np.full(nodes.shape, float(y))), dtype=complex)
    hvals = h(nodes)
    for z in zetas:
        kern = np.exp(-nodes * z) * weights
        Lf = kern @ hvals
        for y in ys:
            lhs = kern @ slices[y]
            rhs = np.exp(-y / z) * Lf
            dev = abs(lhs - rhs) / (abs(rhs) + EPS_FLOOR)
            rows.append((z, float(y), complex(lhs), complex(rhs), float(dev)))
    return rows


def evolution_deviation(f, grid, quad=DEFAULT_QUAD, zetas=(1, 2, 1 + 1j), ys=(0.0, -0.5, -1.0), X_max=None):
    """max over (zeta, y) of |L[u(., y)] - exp(-y/zeta) L[f]| / (|exp(-y/zeta) L[f]| + EPS_FLOOR).

    Both transforms are truncated at the same X_max (default: the grid's
    right edge), so the comparison isolates the evolution law.
    """
    rows = evolution_table(f, grid, quad, zetas, ys, X_max)
    return max(r[4] for r in rows)


def vanishing_region(zeta, theta1, theta2):
    """True iff Re zeta > theta1 and Re(1/zeta) > theta2."""
    zeta = complex(zeta)
    if zeta == 0:
        return False
    return zeta.real > theta1 and (1 / zeta).real > theta2


def vanishing_region_probe(theta1, theta2, step=0.01, extent=10.0):
    """Whether any point of the grid theta1 + step*k + i*step*m
    (0 < step*k <= extent, |step*m| <= extent) lies in the vanishing region."""
    re = theta1 + step * np.arange(1, int(round(extent / step)) + 1)
    im = step * np.arange(-int(round(extent / step)), int(round(extent / step)) + 1)
    # Re(1/zeta) = Re zeta / |zeta|^2; the imaginary part only shrinks it
    inv_re = re[:, None] / (re[:, None] ** 2 + im[None, :] ** 2)
    return bool(np.any(inv_re > theta2))
