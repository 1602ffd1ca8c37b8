"""Bivariate Bessel functions J_{a,0}(x, y) = sum_j (-1)^j x^(j+a) y^j / ((j+a)! j!).

For x, y > 0 these reduce to (x/y)^(a/2) J_a(2 sqrt(xy)); for xy < 0 every
term has the same sign and the functions grow like modified Bessel functions.
The convention J_{0,a}(u, v) = J_{a,0}(v, u) is used throughout.

Evaluation is by direct summation, so the product |xy| is capped at
``SERIES_CAP``. At the cap the alternating series loses about eight digits
to cancellation.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import ConvergenceError, DomainError

SERIES_CAP = 100.0
ASYMPTOTIC_THRESHOLD = 25.0


@dataclass(frozen=True)
class SeriesParams:
    rel_tol: float = 1e-15
    max_terms: int = 400

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_SERIES = SeriesParams()


@dataclass(frozen=True)
class BesselValue:
    value: complex
    est_error: float


def _check_order(a):
    if int(a) != a or a < 0:
        raise DomainError(f"order must be a nonnegative integer, got {a!r}")
    return int(a)


def biv_bessel_array(a, x, y, params=DEFAULT_SERIES, with_error=False):
    """Vectorised J_{a,0}(x, y) over broadcast arrays of real arguments.

    Raises DomainError if any |x*y| exceeds the series cap.
    """
    a = _check_order(a)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))
    shape = x.shape
    xf = np.ascontiguousarray(x).ravel()
    yf = np.ascontiguousarray(y).ravel()
    if not (np.all(np.isfinite(xf)) and np.all(np.isfinite(yf))):
        raise DomainError("bivariate Bessel arguments must be finite")
    if xf.size and np.max(np.abs(xf * yf)) > SERIES_CAP:
        worst = int(np.argmax(np.abs(xf * yf)))
        raise DomainError(
            f"|x*y| = {abs(xf[worst] * yf[worst]):.6g} exceeds the series cap {SERIES_CAP:g} "
            f"at (x, y) = ({xf[worst]:.6g}, {yf[worst]:.6g})"
        )
    vals, errs, status = _core.biv_bessel(a, xf, yf, float(params.rel_tol), int(params.max_terms))
    if np.any(status):
        raise ConvergenceError(f"series for J_{{{a},0}} did not converge within {params.max_terms} terms")
    vals = np.asarray(vals).reshape(shape)
    if with_error:
        return vals, np.asarray(errs).reshape(shape)
    return vals


def eval_biv_bessel(a, x, y, params=DEFAULT_SERIES):
    """J_{a,0}(x, y) at a single point, with a truncation-plus-rounding error bound."""
    v, e = biv_bessel_array(a, float(x), float(y), params, with_error=True)
    return BesselValue(complex(float(v)), float(e))


def grad_biv_bessel(a, x, y, params=DEFAULT_SERIES):
    """(d/dx, d/dy) of J_{a,0} at (x, y), from the order recurrences.

    d/dx J_{a,0} = J_{a-1,0} for a >= 1, d/dx J_{0,0} = -J_{1,0}(y, x),
    d/dy J_{a,0} = -J_{a+1,0}.
    """
    a = _check_order(a)
    if a >= 1:
        dx = eval_biv_bessel(a - 1, x, y, params)
    else:
        w = eval_biv_bessel(1, y, x, params)
        dx = BesselValue(-w.value, w.est_error)
    w = eval_biv_bessel(a + 1, x, y, params)
    dy = BesselValue(-w.value, w.est_error)
    return dx, dy


def asymptotic_J00(x, y_abs):
    """Leading large-argument form of J_{0,0}(x, -y_abs) for x, y_abs > 0.

    (x y)^(-1/4) exp(2 sqrt(x y)) / (2 sqrt(pi)); requires x*y_abs >= 25.
    """
    if not (x > 0 and y_abs > 0):
        raise DomainError("asymptotic_J00 needs x > 0 and y_abs > 0")
    p = x * y_abs
    if p < ASYMPTOTIC_THRESHOLD:
        raise DomainError(f"x*y_abs = {p:g} is below the asymptotic threshold {ASYMPTOTIC_THRESHOLD:g}")
    return math.exp(2.0 * math.sqrt(p)) * p ** -0.25 / (2.0 * math.sqrt(math.pi))
