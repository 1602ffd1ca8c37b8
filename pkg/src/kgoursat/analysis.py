"""Growth-regime analysis: integral bounds, conjugates, coverings, classifier.

The quantities here feed the uniqueness results for u_xy + u = 0 with
boundary data growing like exp(theta1 x^q) and exp(theta2 |y|^q).
"""

import math
from dataclasses import dataclass

import numpy as np

from .bessel import DEFAULT_SERIES, biv_bessel_array
from .boundary import BoundaryFunction
from .errors import ConvergenceError, DomainError, SpecError
from .quadrature import DEFAULT_QUAD, gauss_legendre
from .riemann import unilateral_horizontal

UNIQUE = "UniqueForced"
NONTRIVIAL = "NontrivialExists"
UNKNOWN = "Unknown"


# ---------------------------------------------------------------- bounds


@dataclass(frozen=True)
class BoundConstants:
    A: float
    B: float
    D: float


def _open_q(q):
    if not 0 < q < 1:
        raise DomainError(f"q must lie strictly between 0 and 1, got {q!r}")


def bound_constants(q, theta):
    """A, B, D with int_0^inf exp(theta t^q - sigma t) dt
    <= (1/sigma)(A sigma^{-q/(2(1-q))} + B) exp(D sigma^{-q/(1-q)})."""
    _open_q(q)
    if not theta > 0:
        raise DomainError("theta must be positive")
    qt = q * theta
    A = 2 ** (1 - q / 2) * qt ** (1 / (2 * (1 - q))) * math.sqrt(2 * math.pi / (1 - q))
    B = 4 / (1 - q)
    D = (1 - q) * theta * qt ** (q / (1 - q))
    return BoundConstants(A, B, D)


def log_lemma_bound(q, theta, sigma):
    c = bound_constants(q, theta)
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    return (
        -math.log(sigma)
        + math.log(c.A * sigma ** (-q / (2 * (1 - q))) + c.B)
        + c.D * sigma ** (-q / (1 - q))
    )


def lemma_bound(q, theta, sigma):
    lb = log_lemma_bound(q, theta, sigma)
    return math.exp(lb) if lb < 709 else math.inf


def _adaptive_gl(func, a, b, atol, budget, n=16):
    """Adaptive bisection with an n-point rule until each piece's two-halves
    correction is below its share of ``atol``; returns (integral, intervals used)."""
    x, w = gauss_legendre(n)

    def rule(lo, hi):
        h = 0.5 * (hi - lo)
        return h * (w @ func(0.5 * (lo + hi) + h * x))

    total = 0.0
    used = 0
    stack = [(a, b, rule(a, b))]
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left, right = rule(lo, mid), rule(mid, hi)
        used += 1
        if used > budget:
            raise ConvergenceError("adaptive quadrature exceeded its interval budget")
        share = atol * (hi - lo) / (b - a)
        if abs(left + right - whole) <= share or hi - lo < 1e-14 * max(1, abs(lo)):
            total += left + right
        else:
            stack.append((lo, mid, left))
            stack.append((mid, hi, right))
    return total, used


def log_growth_integral(q, theta, sigma, rtol=1e-12, budget=20000):
    """log of int_0^inf exp(theta t^q - sigma t) dt.

    With t = t0 (1 + s), t0 the maximiser of the exponent and
    K = theta t0^q, the exponent becomes peak - K h(s) with
    h(s) = q s - ((1 + s)^q - 1) >= 0 convex. The s-axis is split
    geometrically around the peak at the Laplace width, and the tail
    beyond the last panel is cut where a tangent-line bound makes it
    negligible.
    """
    _open_q(q)
    if not (theta > 0 and sigma > 0):
        raise DomainError("theta and sigma must be positive")
    t0 = (q * theta / sigma) ** (1 / (1 - q))
    K = theta * t0**q
    peak = (1 - q) * theta * (q * theta) ** (q / (1 - q)) * sigma ** (-q / (1 - q))

    # binomial series near the peak avoids cancellation when K is huge
    coef = [1.0, q]
    for k in range(2, 64):
        coef.append(coef[-1] * (q - k + 1) / k)
    series_coef = -np.asarray(coef[2:])[::-1]

    def h(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        with np.errstate(divide="ignore"):
            out = q * s - np.expm1(q * np.log1p(s))
        near = np.abs(s) < 0.5
        out[near] = np.polyval(series_coef, s[near]) * s[near] ** 2
        return out

    def dh(s):
        return q * (1 - (1 + s) ** (q - 1))

    def integrand(s):
        return np.exp(-K * h(s))

    width = 1 / math.sqrt(K * q * (1 - q))
    edges = [0.0]
    d = width
    while d < 1:
        edges.insert(0, -d)
        d *= 2
    # the cusp of (1 + s)^q at s = -1 gets a geometrically graded mesh
    a = edges[0]
    edges[:0] = [-1.0 + (a + 1.0) * 2.0**-k for k in range(48, 0, -1)]
    edges.insert(0, -1.0)
    # right side: extend until the tangent-line tail is negligible
    d = width
    right = [0.0]
    while True:
        right.append(d)
        s1 = d
        tail = math.exp(-K * h(s1)[0]) / (K * dh(s1))
        if tail < 1e-16 * min(1.0, width):
            break
        d *= 2
        if d > 1e300:
            raise ConvergenceError("growth integral tail cutoff not found")
    nodes = edges + right[1:]
    x, w = gauss_legendre(16)
    coarse = sum(0.5 * (hi - lo) * (w @ integrand(0.5 * (lo + hi) + 0.5 * (hi - lo) * x))
                 for lo, hi in zip(nodes[:-1], nodes[1:]))
    atol = rtol * coarse / (len(nodes) - 1)
    total = 0.0
    used = 0
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        if hi <= lo:
            continue
        part, n_used = _adaptive_gl(integrand, lo, hi, atol, budget - used)
        used += n_used
        total += part
    total += tail
    return peak + math.log(t0) + math.log(total)


def numeric_growth_integral(q, theta, sigma, rtol=1e-12, budget=20000):
    """int_0^inf exp(theta t^q - sigma t) dt (inf if it overflows a double)."""
    lv = log_growth_integral(q, theta, sigma, rtol, budget)
    return math.exp(lv) if lv < 709 else math.inf


# ------------------------------------------------------------ classifier


@dataclass(frozen=True)
class Regime:
    verdict: str
    theorem: str


def qpp(q):
    """q'' = q / (2q - 1) for q > 1/2."""
    if not q > 0.5:
        raise DomainError("q'' is defined only for q > 1/2")
    return q / (2 * q - 1)


def threshold_intermediate(q):
    """(1/q)^{1/q} (1/q'')^{1/q''} sin^2(pi / (2q)) for 1/2 < q < 1."""
    p = qpp(q)
    return (1 / q) ** (1 / q) * (1 / p) ** (1 / p) * math.sin(math.pi / (2 * q)) ** 2


def regime_classify(q, theta1, theta2):
    """Uniqueness verdict for data of growth order q with types theta1, theta2.

    Above the proven thresholds for 1/2 <= q < 1 nothing is proven either
    way, so the verdict is Unknown.
    """
    if not (theta1 > 0 and theta2 > 0):
        raise DomainError("theta1 and theta2 must be positive")
    if not 0 < q <= 1:
        raise DomainError(f"q must lie in (0, 1], got {q!r}")
    if q == 1:
        if theta1 * theta2 < 1:
            return Regime(UNIQUE, "Thm-main-1-0")
        return Regime(NONTRIVIAL, "Thm-main-1-1")
    if q < 0.5:
        return Regime(UNIQUE, "Thm-main-2")
    if q == 0.5:
        return Regime(UNIQUE if theta1 * theta2 < 2 * math.pi else UNKNOWN, "Thm-main-3")
    p = qpp(q)
    lhs = theta1 ** (1 / q) * theta2 ** (1 / p)
    return Regime(UNIQUE if lhs < threshold_intermediate(q) else UNKNOWN, "Thm-main-1-2")


# ----------------------------------------------------------- minimisation


def psi(y, sigma_prime, theta2, q):
    """theta2 |y|^{q''} - |y| sigma'."""
    r = np.abs(np.asarray(y, dtype=float))
    return theta2 * r ** qpp(q) - r * sigma_prime


def y_star_min(sigma_prime, theta2, q):
    """Minimiser y* < 0 of psi, the minimum and the constant E with
    psi_min = -E sigma'^{q/(1-q)}."""
    if not 0.5 < q < 1:
        raise DomainError("q must lie in (1/2, 1)")
    if not (sigma_prime > 0 and theta2 > 0):
        raise DomainError("sigma' and theta2 must be positive")
    p = qpp(q)
    y_star = -((sigma_prime / (theta2 * p)) ** (1 / (p - 1)))
    E = (1 / q - 1) * (p * theta2) ** ((1 - 2 * q) / (1 - q))
    psi_min = -E * sigma_prime ** (q / (1 - q))
    direct = float(psi(y_star, sigma_prime, theta2, q))
    if abs(direct - psi_min) > 1e-12 * max(1.0, abs(psi_min)):
        raise ArithmeticError(f"minimum {psi_min!r} disagrees with psi(y*) = {direct!r}")
    return y_star, psi_min, E


# ---------------------------------------------------------------- covering


@dataclass(frozen=True)
class CoveringSpec:
    Y: tuple
    M: float
    q: float
    y1: float
    probe_depth: float

    def __post_init__(self):
        Y = tuple(float(v) for v in self.Y)
        object.__setattr__(self, "Y", Y)
        if not Y:
            raise SpecError("Y must be nonempty")
        if any(v > 0 for v in Y) or any(b >= a for a, b in zip(Y[:-1], Y[1:])):
            raise SpecError("Y must be strictly decreasing and nonpositive")
        if not self.M > 0:
            raise SpecError("M must be positive")
        if not 0.5 < self.q < 1:
            raise SpecError("q must lie in (1/2, 1)")
        if not self.y1 < 0:
            raise SpecError("y1 must be negative")
        if not self.probe_depth < self.y1:
            raise SpecError("probe_depth must lie below y1")


def covering_radius(y, q):
    """R(y, q) = |y| min(1, |y|^{-q''/2})."""
    r = np.abs(np.asarray(y, dtype=float))
    with np.errstate(divide="ignore"):
        scale = np.where(r > 0, np.minimum(1.0, r ** (-qpp(q) / 2)), 0.0)
    return r * scale


MAX_PROBES = 10_000_000


def _covering_probes(spec):
    Y = np.asarray(spec.Y)
    rad = spec.M * covering_radius(Y, spec.q)
    pos = rad[rad > 0]
    if pos.size == 0:
        raise SpecError("no sample point has a positive covering radius")
    step = float(pos.min()) / 4
    n = int(math.floor((spec.y1 - spec.probe_depth) / step)) + 1
    if n > MAX_PROBES:
        raise SpecError(f"probe grid would need {n} points")
    grid = spec.y1 - step * np.arange(n)
    grid = np.append(grid, spec.probe_depth)
    lo, hi = Y - rad, Y + rad
    # gaps between merged intervals are probed too, so the check is exact
    order = np.argsort(lo)
    merged = []
    for a, b in zip(lo[order], hi[order]):
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    extra = []
    bounds = [-math.inf] + [v for ab in merged for v in ab] + [math.inf]
    for a, b in zip(bounds[0::2], bounds[1::2]):
        ga, gb = max(a, spec.probe_depth), min(b, spec.y1)
        if ga < gb or (ga == gb and a < ga < b):
            extra.append(0.5 * (ga + gb))
    probes = np.unique(np.concatenate([grid, extra]))[::-1]
    covered = np.zeros(probes.shape, dtype=bool)
    for a, b in merged:
        covered |= (probes >= a) & (probes <= b)
    return probes, covered


def q_covering_check(spec):
    """True iff every probe point of [probe_depth, y1] lies in some
    [y - M R(y, q), y + M R(y, q)], y in Y."""
    _, covered = _covering_probes(spec)
    return bool(np.all(covered))


def first_uncovered_probe(spec):
    """The uncovered probe closest to y1, or None."""
    probes, covered = _covering_probes(spec)
    bad = np.nonzero(~covered)[0]
    return None if bad.size == 0 else float(probes[bad[0]])


# -------------------------------------------------------------------- ANQA


def anqa_integral(q, theta, delta, panels=64):
    """int_delta^1 sqrt(kappa(t)/t) dt with kappa(t) = D t^{-q/(1-q)},
    and whether the delta -> 0 limit is finite (iff q < 1/2)."""
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    D = bound_constants(q, theta).D
    expo = 1 / (2 * (1 - q))
    # t = exp(v) makes the integrand a smooth exponential in v
    x, w = gauss_legendre(16)
    edges = np.linspace(math.log(delta), 0.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    v = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    value = math.sqrt(D) * float(wt @ np.exp(v * (1 - expo)))
    return value, q < 0.5


# --------------------------------------------------------------- conjugate


def beta(y, theta2):
    """y exp(theta2 sqrt(y)) for y >= 0."""
    y = np.asarray(y, dtype=float)
    return y * np.exp(theta2 * np.sqrt(y))


def legendre_conjugate_beta(theta2, t, rtol=1e-10):
    """sup_{y >= 0} (y t - beta(y)) by bracketing and golden-section search."""
    if not theta2 > 0:
        raise DomainError("theta2 must be positive")
    if not t > 0:
        raise DomainError("t must be positive")
    if t <= 1:
        # y t - beta(y) <= y (t - 1) <= 0, attained at y = 0
        return 0.0

    def phi(y):
        return y * t - float(beta(y, theta2))

    a, b = 0.0, 1.0
    while phi(2 * b) > phi(b):
        a, b = b, 2 * b
        if b > 1e300:
            raise ConvergenceError("could not bracket the maximiser")
    b = 2 * b
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(400):
        if b - a <= rtol * max(b, 1e-300):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = phi(d)
    else:
        raise ConvergenceError("golden-section search did not converge")
    return max(phi(0.5 * (a + b)), fc, fd, 0.0)


def beta_conjugate_asymptotic(t):
    """Two-term large-t form t log^2 t - 2 t log t log log t (theta2 = 1)."""
    L = math.log(t)
    return t * L * L - 2 * t * L * math.log(L)


# ---------------------------------------------------------------- envelope


def u1_envelope_check(grid, quad=DEFAULT_QUAD, theta1=1.0, theta2=1.0, series=DEFAULT_SERIES):
    """Compare the ramp-driven wave u1 = R[ramp, 0] with its envelope.

    Returns (max_violation, sup_ratio) where the violation measures how far
    u1 leaves 0 <= Re u1 <= J00(x, -|y|), Im u1 = 0, and sup_ratio is
    max u1 / exp(theta1 x + theta2 |y|) over the grid.
    """
    if grid.xs[0] < 0 or grid.ys[-1] > 0:
        raise DomainError("the envelope check lives on x >= 0, y <= 0")
    u1 = unilateral_horizontal(BoundaryFunction.ramp(), grid, quad, series).values
    X, Y = grid.mesh()
    env = biv_bessel_array(0, X, -np.abs(Y), series).real
    viol = np.maximum.reduce([-u1.real, u1.real - env, np.abs(u1.imag)])
    ratio = u1.real / np.exp(theta1 * X + theta2 * np.abs(Y))
    return float(np.max(viol)), float(np.max(ratio))
