"""Quadrature-identity checks, the Picard solver and gluing along characteristics.

A continuous u solves u_xy + u = 0 exactly when, for every rectangle
[a, a'] x [b, b'],

    int_a^a' int_b^b' u = u(a', b) + u(a, b') - u(a', b') - u(a, b).

The residual of this identity is the derivative-free test used everywhere
below. For many rectangles with corners on a node set it is cheapest to
tabulate H(x, y) = int int_{lo}^{(x, y)} u + u(x, y): the residual of a
rectangle is then the mixed second difference of H over its corners.
"""

from dataclasses import dataclass

import numpy as np

from .boundary import check_corner
from .errors import AlignmentError, ContinuityError, ConvergenceError, DomainError
from .field import Field, FieldEvaluator, Grid
from .quadrature import DEFAULT_QUAD, AxisRule, composite_rule


@dataclass(frozen=True)
class Rectangle:
    a: float
    a2: float
    b: float
    b2: float

    def __post_init__(self):
        if self.a2 < self.a or self.b2 < self.b:
            raise ValueError("rectangle needs a <= a' and b <= b'")

    @property
    def area(self):
        return (self.a2 - self.a) * (self.b2 - self.b)


@dataclass(frozen=True)
class IterationReport:
    iterations: int
    final_update_sup: float
    converged: bool
    history: tuple = ()


@dataclass(frozen=True)
class CharacteristicLine:
    """Horizontal line y = c or vertical line x = c."""

    orientation: str
    c: float

    def __post_init__(self):
        if self.orientation not in ("horizontal", "vertical"):
            raise ValueError("orientation must be 'horizontal' or 'vertical'")


def _as_evaluator(u):
    if isinstance(u, Field):
        return FieldEvaluator(u), u.grid
    if not callable(u):
        raise TypeError("u must be a Field or a callable u(x, y)")
    return u, None


def _breaks(u, axis):
    return tuple(getattr(u, f"{axis}_breaks", ()))


def quadrature_residual(u, rect, quad=DEFAULT_QUAD):
    """Residual of the quadrature identity of ``u`` on one rectangle.

    ``u`` is a Field (sampled exactly through its sampler, else bilinearly)
    or any callable u(x, y) on arrays; the double integral uses a tensor
    Gauss-Legendre rule split at the solution's kink lines.
    """
    if not isinstance(rect, Rectangle):
        rect = Rectangle(*rect)
    ev, grid = _as_evaluator(u)
    if grid is not None and not np.all(grid.contains([rect.a, rect.a2], [rect.b, rect.b2])):
        raise DomainError("rectangle leaves the field's grid")
    if rect.area == 0:
        return 0j
    xn, xw = composite_rule(rect.a, rect.a2, _breaks(ev, "x"), quad)
    yn, yw = composite_rule(rect.b, rect.b2, _breaks(ev, "y"), quad)
    vals = np.asarray(ev(xn[:, None], yn[None, :]), dtype=complex)
    integral = xw @ vals @ yw
    c = np.asarray(ev(np.array([rect.a2, rect.a, rect.a2, rect.a]), np.array([rect.b, rect.b2, rect.b2, rect.b])))
    return complex(integral - (c[0] + c[1] - c[2] - c[3]))


def potential_table(u, xs, ys, quad=DEFAULT_QUAD):
    """H[i, j] = int_{xs[0]}^{xs[i]} int_{ys[0]}^{ys[j]} u + u(xs[i], ys[j])."""
    ev, grid = _as_evaluator(u)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if grid is not None and not np.all(grid.contains(xs[[0, -1]], ys[[0, -1]])):
        raise DomainError("probe nodes leave the field's grid")
    corner = np.asarray(ev(xs[:, None], ys[None, :]), dtype=complex)
    if xs.size < 2 or ys.size < 2:
        return corner
    rx = AxisRule(xs[0], xs[-1], tuple(xs) + _breaks(ev, "x"), quad)
    ry = AxisRule(ys[0], ys[-1], tuple(ys) + _breaks(ev, "y"), quad)
    vals = np.asarray(ev(rx.nodes[:, None], ry.nodes[None, :]), dtype=complex)
    Cx = rx.cumulative_at_edges_matrix()[rx.edge_index(xs)]
    Cy = ry.cumulative_at_edges_matrix()[ry.edge_index(ys)]
    return Cx @ vals @ Cy.T + corner


def _mixed_differences_max(H, min_steps):
    """max |H[j,l] - H[i,l] - H[j,k] + H[i,k]| over i<j, k<l with gaps >= min_steps."""
    nx, ny = H.shape
    k, l = np.triu_indices(ny, min_steps)
    worst = 0.0
    for i in range(nx):
        for j in range(i + min_steps, nx):
            d = H[j] - H[i]
            if k.size:
                worst = max(worst, float(np.max(np.abs(d[l] - d[k]))))
    return worst


def probe_nodes(axis, max_nodes=None):
    """Probe subset of an axis: all nodes, or ``max_nodes`` evenly chosen
    ones including both ends."""
    axis = np.asarray(axis, dtype=float)
    if max_nodes is None or axis.size <= max_nodes:
        return axis
    idx = np.unique(np.round(np.linspace(0, axis.size - 1, max_nodes)).astype(int))
    return axis[idx]


def max_probe_residual(u, xs, ys, quad=DEFAULT_QUAD, min_steps=2):
    """Largest residual over all rectangles with corners on xs x ys whose
    sides span at least ``min_steps`` probe steps."""
    H = potential_table(u, xs, ys, quad)
    return _mixed_differences_max(H, min_steps)


def field_probe_residual(field, quad=DEFAULT_QUAD, max_nodes=None, min_steps=2):
    """max_probe_residual over the field's own grid nodes (optionally thinned)."""
    return max_probe_residual(
        field, probe_nodes(field.grid.xs, max_nodes), probe_nodes(field.grid.ys, max_nodes), quad, min_steps
    )


class PicardSampler:
    """Nystrom evaluation u(x, y) = f(x) + g(y) - f(0) - int_0^x int_0^y u_n."""

    def __init__(self, f, g, f0, rx, ry, U):
        self.f, self.g, self.f0 = f, g, f0
        self.rx, self.ry, self.U = rx, ry, U
        self.x_breaks = tuple(f.breakpoints)
        self.y_breaks = tuple(g.breakpoints)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        shape = x.shape
        X, Y = x.ravel(), y.ravel()
        base = self.f(X) + self.g(Y) - self.f0
        if self.rx is None or self.ry is None:
            return base.reshape(shape)
        try:
            Cx = self.rx.cumulative_matrix(X)
            Cy = self.ry.cumulative_matrix(Y)
        except ValueError:
            raise DomainError("point outside the Picard solution's grid") from None
        return (base - np.einsum("pi,ij,pj->p", Cx, self.U, Cy)).reshape(shape)


def picard_solve(f, g, grid, quad=DEFAULT_QUAD, tol=1e-9, max_iter=50):
    """Solve the Goursat problem by iterating the Volterra form of the
    quadrature identity, u_{n+1} = f(x) + g(y) - f(0) - int_0^x int_0^y u_n.

    The iterate lives on tensor Gauss-Legendre nodes whose panels have the
    grid nodes (and data kinks) as edges; grid values follow from exact
    cumulative integration of the panel interpolants. Stops when the sup
    over grid nodes of |u_{n+1} - u_n| is <= tol.

    Returns (Field, IterationReport). On budget exhaustion raises
    ConvergenceError carrying ``report`` and ``field``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    f0 = check_corner(f, g)
    xs, ys = grid.xs, grid.ys
    if not (xs[0] <= 0 <= xs[-1] and ys[0] <= 0 <= ys[-1]):
        raise DomainError("the grid must straddle both characteristic axes")
    F_grid = f(xs)[:, None] + g(ys)[None, :] - f0

    if xs.size < 2 or ys.size < 2:
        report = IterationReport(1, 0.0, True, (0.0,))
        sampler = PicardSampler(f, g, f0, None, None, None)
        return Field(grid, F_grid, "picard", sampler), report

    rx = AxisRule(xs[0], xs[-1], tuple(xs) + f.breakpoints + (0.0,), quad)
    ry = AxisRule(ys[0], ys[-1], tuple(ys) + g.breakpoints + (0.0,), quad)
    Cx = rx.cumulative_matrix(rx.nodes)
    Cy = ry.cumulative_matrix(ry.nodes)
    Gx = rx.cumulative_matrix(xs)
    Gy = ry.cumulative_matrix(ys)
    F_nodes = f(rx.nodes)[:, None] + g(ry.nodes)[None, :] - f0

    U = F_nodes
    G = F_grid
    history = []
    converged = False
    for it in range(1, max_iter + 1):
        U_prev = U
        U = F_nodes - Cx @ U_prev @ Cy.T
        G_new = F_grid - Gx @ U_prev @ Gy.T
        upd = float(np.max(np.abs(G_new - G)))
        G = G_new
        history.append(upd)
        if upd <= tol:
            converged = True
            break

    report = IterationReport(it, history[-1], converged, tuple(history))
    field = Field(grid, G, "picard", PicardSampler(f, g, f0, rx, ry, U_prev))
    if not converged:
        err = ConvergenceError(f"Picard iteration did not reach tol={tol:g} in {max_iter} iterations", report)
        err.field = field
        raise err
    return field, report


class _Transposed:
    def __init__(self, ev):
        self.ev = ev
        self.x_breaks = _breaks(ev, "y")
        self.y_breaks = _breaks(ev, "x")

    def __call__(self, x, y):
        return self.ev(y, x)


def _transpose_field(field):
    grid = Grid(field.grid.ys, field.grid.xs)
    sampler = None if field.sampler is None else _Transposed(field.sampler)
    return Field(grid, field.values.T, field.meta, sampler)


def glue_residual(u_lower, u_upper, line, quad=DEFAULT_QUAD, max_nodes=9, trace_tol=1e-9):
    """Largest quadrature residual of the glued function over rectangles
    straddling a characteristic line.

    ``u_lower`` supplies the function on the side y <= c (x <= c for a
    vertical line), ``u_upper`` on the other side. Each straddling residual
    is the sum of the two one-sided residuals. Both fields must share the
    axis along the line and contain the line as a grid row.
    """
    if not isinstance(line, CharacteristicLine):
        line = CharacteristicLine(*line)
    if line.orientation == "vertical":
        u_lower, u_upper = _transpose_field(u_lower), _transpose_field(u_upper)
    c = float(line.c)
    lo, up = u_lower.grid, u_upper.grid
    if not np.array_equal(lo.xs, up.xs):
        raise AlignmentError("fields do not share the grid axis along the line")
    if not (np.any(np.isclose(lo.ys, c, rtol=0, atol=1e-12)) and np.any(np.isclose(up.ys, c, rtol=0, atol=1e-12))):
        raise AlignmentError(f"line at {c:g} is not a grid row of both fields")
    below = lo.ys[lo.ys < c - 1e-12]
    above = up.ys[up.ys > c + 1e-12]
    if below.size == 0 or above.size == 0:
        raise AlignmentError("each field must extend beyond the line on its own side")

    mismatch = float(np.max(np.abs(u_lower.row(c) - u_upper.row(c))))
    if mismatch > trace_tol:
        raise ContinuityError(f"traces differ along the line by {mismatch:.3g} (> {trace_tol:g})")

    xs = probe_nodes(lo.xs, max_nodes)
    ys_lo = np.append(probe_nodes(below, max_nodes - 1), c)
    ys_up = np.insert(probe_nodes(above, max_nodes - 1), 0, c)
    H_lo = potential_table(u_lower, xs, ys_lo, quad)
    H_up = potential_table(u_upper, xs, ys_up, quad)
    # one-sided residual of [x_i, x_j] x [y_k, c] is mixed difference of H_lo
    d_lo = H_lo[:, -1:] - H_lo  # H(x, c) - H(x, y_k)
    d_up = H_up[:, 1:] - H_up[:, :1]  # H(x, y_l) - H(x, c)
    worst = 0.0
    for i in range(xs.size):
        for j in range(i + 1, xs.size):
            r_lo = d_lo[j] - d_lo[i]
            r_up = d_up[j] - d_up[i]
            worst = max(worst, float(np.max(np.abs(r_lo[:-1, None] + r_up[None, :]))))
    return worst
