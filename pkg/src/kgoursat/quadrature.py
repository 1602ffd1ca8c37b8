"""Composite Gauss-Legendre rules on panels split at breakpoints.

Everything here is oriented: a rule for the interval from ``lo`` to ``hi``
with ``hi < lo`` carries negative weights, so integrals from 0 to a negative
limit come out with the right sign.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg


@dataclass(frozen=True)
class QuadratureSpec:
    panels_per_unit: int = 8
    nodes_per_panel: int = 8

    def __post_init__(self):
        if self.panels_per_unit < 1:
            raise ValueError("panels_per_unit must be >= 1")
        if not 4 <= self.nodes_per_panel <= 16:
            raise ValueError("nodes_per_panel must lie in 4..16")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = npleg.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _partial_basis_coeffs(n):
    """Matrix K with K[i, j] = w_i P_j(x_i) (2j+1)/2, so that
    l_i(t) = sum_j K[i, j] P_j(t) for the Lagrange basis on the n GL nodes."""
    x, w = gauss_legendre(n)
    V = npleg.legvander(x, n - 1)
    return w[:, None] * V * ((2 * np.arange(n) + 1) / 2.0)[None, :]


def partial_panel_weights(n, xi):
    """Weights c_i(xi) = int_{-1}^{xi} l_i(t) dt for reference points ``xi``.

    Returns an array of shape (len(xi), n); exact for polynomials of
    degree < n.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    P = npleg.legvander(xi, n)  # P_0 .. P_n
    Q = np.empty((xi.size, n))
    Q[:, 0] = xi + 1.0
    for j in range(1, n):
        Q[:, j] = (P[:, j + 1] - P[:, j - 1]) / (2 * j + 1)
    return Q @ _partial_basis_coeffs(n).T


def panel_edges(lo, hi, breakpoints=(), quad=DEFAULT_QUAD):
    """Sorted panel edges covering [min(lo,hi), max(lo,hi)].

    Interior breakpoints become edges; every segment between consecutive
    edges is cut into ceil(panels_per_unit * length) equal panels.
    """
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    stops = [a] + sorted({float(p) for p in breakpoints if a < p < b}) + [b]
    edges = [a]
    for s0, s1 in zip(stops[:-1], stops[1:]):
        k = max(1, math.ceil(quad.panels_per_unit * (s1 - s0) - 1e-9))
        seg = np.linspace(s0, s1, k + 1)
        edges.extend(seg[1:].tolist())
    return np.asarray(edges)


def composite_rule(lo, hi, breakpoints=(), quad=DEFAULT_QUAD):
    """Nodes and oriented weights approximating int_lo^hi."""
    if lo == hi:
        return np.zeros(0), np.zeros(0)
    edges = panel_edges(lo, hi, breakpoints, quad)
    x, w = gauss_legendre(quad.nodes_per_panel)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    if hi < lo:
        weights = -weights
    return nodes, weights


def rules_from_zero(limits, breakpoints=(), quad=DEFAULT_QUAD):
    """Padded rules for int_0^L, one row per entry of ``limits``.

    Returns ``(nodes, weights, inverse)`` where ``nodes``/``weights`` have one
    row per distinct limit and ``inverse`` maps each input limit to its row.
    Padding entries have node 0 and weight 0.
    """
    limits = np.asarray(limits, dtype=float)
    uniq, inverse = np.unique(limits, return_inverse=True)
    rules = [composite_rule(0.0, float(L), breakpoints, quad) for L in uniq]
    width = max((r[0].size for r in rules), default=0)
    nodes = np.zeros((uniq.size, max(width, 1)))
    weights = np.zeros_like(nodes)
    for i, (s, w) in enumerate(rules):
        nodes[i, : s.size] = s
        weights[i, : w.size] = w
    return nodes, weights, inverse.reshape(limits.shape)


class AxisRule:
    """Composite GL discretisation of one axis with edges at prescribed stops.

    ``stops`` (e.g. grid nodes, kinks, 0) always fall on panel edges, so
    cumulative integrals at the stops are plain partial sums of panel
    integrals. ``cumulative_matrix`` extends this to arbitrary points inside
    the axis range via exact integration of the panel interpolant.
    """

    def __init__(self, lo, hi, stops=(), quad=DEFAULT_QUAD):
        if not hi > lo:
            raise ValueError("AxisRule needs lo < hi")
        self.lo = float(lo)
        self.hi = float(hi)
        self.quad = quad
        self.n = quad.nodes_per_panel
        self.edges = panel_edges(self.lo, self.hi, stops, quad)
        x, w = gauss_legendre(self.n)
        half = 0.5 * np.diff(self.edges)
        mid = 0.5 * (self.edges[1:] + self.edges[:-1])
        self.half = half
        self.nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        self.weights = (half[:, None] * w[None, :]).ravel()
        self.npanels = half.size
        self._cum_edges = None

    def edge_index(self, values):
        """Indices of ``values`` among the panel edges (they must be edges)."""
        values = np.asarray(values, dtype=float)
        idx = np.searchsorted(self.edges, values)
        idx = np.clip(idx, 0, self.edges.size - 1)
        alt = np.clip(idx - 1, 0, self.edges.size - 1)
        pick = np.where(
            np.abs(self.edges[alt] - values) < np.abs(self.edges[idx] - values), alt, idx
        )
        tol = 1e-12 * max(1.0, self.hi - self.lo)
        if np.any(np.abs(self.edges[pick] - values) > tol):
            raise ValueError("value is not a panel edge of this axis rule")
        return pick

    def panel_sums_matrix(self):
        """(npanels, N) matrix mapping node values to per-panel integrals."""
        M = np.zeros((self.npanels, self.nodes.size))
        for k in range(self.npanels):
            M[k, k * self.n:(k + 1) * self.n] = self.weights[k * self.n:(k + 1) * self.n]
        return M

    def cumulative_at_edges_matrix(self):
        """(npanels+1, N) matrix: row e gives int_lo^{edge_e}."""
        if self._cum_edges is None:
            M = self.panel_sums_matrix()
            self._cum_edges = np.vstack([np.zeros((1, M.shape[1])), np.cumsum(M, axis=0)])
        return self._cum_edges

    def cumulative_matrix(self, points, origin=0.0):
        """(P, N) matrix mapping node values to int_origin^p of the interpolant."""
        points = np.atleast_1d(np.asarray(points, dtype=float))
        span = self.hi - self.lo
        if np.any(points < self.lo - 1e-12 * span) or np.any(points > self.hi + 1e-12 * span):
            raise ValueError("point outside the axis range")
        return self._from_lo(points) - self._from_lo(np.array([origin]))

    def _from_lo(self, points):
        panel = np.clip(np.searchsorted(self.edges, points, side="right") - 1, 0, self.npanels - 1)
        left = self.edges[panel]
        xi = np.clip((points - left) / self.half[panel] - 1.0, -1.0, 1.0)
        cum_edges = self.cumulative_at_edges_matrix()
        out = cum_edges[panel].copy()
        part = partial_panel_weights(self.n, xi) * self.half[panel][:, None]
        cols = panel[:, None] * self.n + np.arange(self.n)[None, :]
        np.add.at(out, (np.arange(points.size)[:, None], cols), part)
        return out
