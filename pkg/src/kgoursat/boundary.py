"""Boundary data for the Goursat problem: univariate complex functions of a real variable.

A :class:`BoundaryFunction` knows where it has kinks (``breakpoints``), so
quadrature can split panels there, and optionally how fast it grows on the
positive half-line (``growth``), which the Laplace transform uses for tail
bounds.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CompatibilityError, UsageError

FORMULA_CORNER_TOL = 1e-12
TABLE_CORNER_TOL = 1e-9


@dataclass(frozen=True)
class GrowthBound:
    """|f(x)| <= constant * exp(theta * x**q) for x >= 0."""

    constant: float
    theta: float = 0.0
    q: float = 1.0

    def __post_init__(self):
        if self.constant < 0 or self.theta < 0:
            raise ValueError("growth constant and theta must be nonnegative")
        if not 0 < self.q <= 1:
            raise ValueError("growth exponent q must lie in (0, 1]")

    def __add__(self, other):
        if other is None:
            return None
        # C1 e^{t1 x^q1} + C2 e^{t2 x^q2} <= (C1 + C2) e^{max...} when q's agree
        if self.q != other.q and self.theta and other.theta:
            return None
        q = self.q if self.theta else other.q
        return GrowthBound(self.constant + other.constant, max(self.theta, other.theta), q)

    def scaled(self, c):
        return GrowthBound(abs(c) * self.constant, self.theta, self.q)


class BoundaryFunction:
    """A callable boundary datum. Build instances with the classmethods."""

    def __init__(self, kind, func, params=(), breakpoints=(), growth=None, corner_tol=FORMULA_CORNER_TOL):
        self.kind = kind
        self.params = tuple(params)
        self._func = func
        self.breakpoints = tuple(sorted(set(float(b) for b in breakpoints)))
        self.growth = growth
        self.corner_tol = corner_tol

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(self._func(t), dtype=complex) * np.ones(t.shape)

    def at(self, t):
        return complex(self(np.array([float(t)]))[0])

    def __repr__(self):
        if self.params:
            return f"BoundaryFunction({self.kind}:{','.join(map(repr, self.params))})"
        return f"BoundaryFunction({self.kind})"

    def with_growth(self, growth):
        return BoundaryFunction(self.kind, self._func, self.params, self.breakpoints, growth, self.corner_tol)

    # arithmetic, used for splitting and linearity checks

    def __add__(self, other):
        if not isinstance(other, BoundaryFunction):
            c = complex(other)
            return BoundaryFunction(
                "sum",
                lambda t, f=self._func: f(t) + c,
                breakpoints=self.breakpoints,
                growth=None if self.growth is None else self.growth + GrowthBound(abs(c)),
                corner_tol=self.corner_tol,
            )
        growth = None
        if self.growth is not None and other.growth is not None:
            growth = self.growth + other.growth
        return BoundaryFunction(
            "sum",
            lambda t, f=self._func, g=other._func: f(t) + g(t),
            breakpoints=self.breakpoints + other.breakpoints,
            growth=growth,
            corner_tol=max(self.corner_tol, other.corner_tol),
        )

    __radd__ = __add__

    def __mul__(self, c):
        c = complex(c)
        return BoundaryFunction(
            "scaled",
            lambda t, f=self._func: c * f(t),
            breakpoints=self.breakpoints,
            growth=None if self.growth is None else self.growth.scaled(c),
            corner_tol=self.corner_tol,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other if isinstance(other, BoundaryFunction) else -complex(other))

    def centered(self):
        """t -> f(t) - f(0), the data of a unilateral wave."""
        return self - self.at(0.0)

    # constructors

    @classmethod
    def zero(cls):
        return cls("zero", lambda t: np.zeros(t.shape), growth=GrowthBound(0.0))

    @classmethod
    def one(cls):
        return cls("one", lambda t: np.ones(t.shape), growth=GrowthBound(1.0))

    @classmethod
    def ramp(cls):
        """min(max(t, 0), 1)."""
        return cls("ramp", lambda t: np.clip(t, 0.0, 1.0), breakpoints=(0.0, 1.0), growth=GrowthBound(1.0))

    @classmethod
    def poly(cls, coeffs):
        """sum_k coeffs[k] t**k. No growth metadata unless attached."""
        coeffs = tuple(complex(c) if isinstance(c, complex) else float(c) for c in coeffs)
        if not coeffs:
            raise ValueError("poly needs at least one coefficient")
        rev = np.asarray(coeffs[::-1])
        return cls("poly", lambda t: np.polyval(rev, t), params=coeffs)

    @classmethod
    def sin(cls, frequency):
        k = float(frequency)
        return cls("sin", lambda t: np.sin(k * t), params=(k,), growth=GrowthBound(1.0))

    @classmethod
    def gauss(cls, center, width):
        """exp(-(t - center)**2 / (2 width**2))."""
        c, s = float(center), float(width)
        if not s > 0:
            raise ValueError("gauss width must be positive")
        return cls("gauss", lambda t: np.exp(-0.5 * ((t - c) / s) ** 2), params=(c, s), growth=GrowthBound(1.0))

    @classmethod
    def table(cls, nodes, values):
        """Piecewise-linear interpolation, constant beyond the end nodes."""
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=complex)
        if nodes.ndim != 1 or nodes.size < 1 or nodes.shape != values.shape:
            raise ValueError("table needs matching 1-d nodes and values")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("table nodes must be strictly increasing")
        re, im = values.real.copy(), values.imag.copy()

        def f(t):
            out = np.interp(t, nodes, re)
            if np.any(im):
                out = out + 1j * np.interp(t, nodes, im)
            return out

        return cls(
            "table",
            f,
            params=(tuple(nodes), tuple(values)),
            breakpoints=nodes,
            growth=GrowthBound(float(np.max(np.abs(values)))),
            corner_tol=TABLE_CORNER_TOL,
        )

    @classmethod
    def from_callable(cls, func, breakpoints=(), growth=None, name="custom"):
        return cls(name, func, breakpoints=breakpoints, growth=growth)


def read_table_csv(path):
    """Read ``t,value[,imag]`` rows (optional header, '#' comments)."""
    nodes, values = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                t = float(row[0])
            except ValueError:
                if nodes:
                    raise UsageError(f"{path}: unparseable row {row!r}")
                continue  # header
            re = float(row[1])
            im = float(row[2]) if len(row) > 2 and row[2].strip() else 0.0
            nodes.append(t)
            values.append(complex(re, im))
    if not nodes:
        raise UsageError(f"{path}: no data rows")
    if any(b <= a for a, b in zip(nodes[:-1], nodes[1:])):
        raise UsageError(f"{path}: table nodes must be strictly increasing")
    return BoundaryFunction.table(nodes, values)


def parse_function_spec(text):
    """Parse ``zero | one | ramp | poly:c0,c1,... | sin:k | gauss:c,s | csv:PATH``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    try:
        if head in ("zero", "one", "ramp") and not rest:
            return getattr(BoundaryFunction, head)()
        if head == "poly" and rest:
            return BoundaryFunction.poly([float(c) for c in rest.split(",")])
        if head == "sin" and rest:
            return BoundaryFunction.sin(float(rest))
        if head == "gauss" and rest:
            c, s = rest.split(",")
            return BoundaryFunction.gauss(float(c), float(s))
        if head == "csv" and rest:
            if not Path(rest).is_file():
                raise UsageError(f"table file not found: {rest}")
            return read_table_csv(rest)
    except UsageError:
        raise
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad function spec {text!r}: {exc}") from None
    raise UsageError(
        f"bad function spec {text!r}; expected zero | one | ramp | poly:c0,c1,... | sin:k | gauss:c,s | csv:PATH"
    )


def check_corner(f, g):
    """Raise CompatibilityError unless f(0) and g(0) agree within tolerance."""
    tol = max(f.corner_tol, g.corner_tol)
    f0, g0 = f.at(0.0), g.at(0.0)
    if abs(f0 - g0) > tol:
        raise CompatibilityError(f"corner mismatch: f(0) = {f0:.17g}, g(0) = {g0:.17g} (tolerance {tol:g})")
    return f0

