"""Tensor grids in characteristic coordinates and immutable complex fields on them.

Field CSV layout: ``#`` comment lines first (grid size, provenance, argv),
then the header ``x,y,re,im``, then one row per node with y as the outer
(slow) index. Floats are written with 17 significant digits, so a
write/read round trip is exact.
"""

import os
import tempfile
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DomainError


def _axis(values, name):
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if np.any(np.diff(arr) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xs", _axis(self.xs, "xs"))
        object.__setattr__(self, "ys", _axis(self.ys, "ys"))

    @classmethod
    def uniform(cls, xmin, xmax, nx, ymin, ymax, ny):
        """Evenly spaced axes; a node within rounding of 0 is snapped to 0."""
        return cls(_snapped(xmin, xmax, nx), _snapped(ymin, ymax, ny))

    @property
    def shape(self):
        return (self.xs.size, self.ys.size)

    @property
    def bounds(self):
        return (self.xs[0], self.xs[-1], self.ys[0], self.ys[-1])

    def mesh(self):
        return np.meshgrid(self.xs, self.ys, indexing="ij")

    def contains(self, x, y, rtol=1e-12):
        x0, x1, y0, y1 = self.bounds
        ex = rtol * max(1.0, x1 - x0)
        ey = rtol * max(1.0, y1 - y0)
        x = np.asarray(x)
        y = np.asarray(y)
        return (x >= x0 - ex) & (x <= x1 + ex) & (y >= y0 - ey) & (y <= y1 + ey)

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ys, other.ys)
        )

    __hash__ = None


def _snapped(lo, hi, n):
    if n < 1:
        raise ValueError("axis needs at least one node")
    if n == 1:
        return np.array([float(lo)])
    v = np.linspace(float(lo), float(hi), int(n))
    v[np.abs(v) < 1e-12 * max(1.0, abs(hi - lo))] = 0.0
    return v


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples u[i, j] = u(xs[i], ys[j]).

    ``sampler`` is an optional callable giving the same function off the
    grid (exact solution evaluation, Nystrom interpolation, ...).
    """

    grid: Grid
    values: np.ndarray
    meta: str = ""
    sampler: object = dc_field(default=None, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} does not match grid {self.grid.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value_at(self, x, y):
        i = _node_index(self.grid.xs, x, "x")
        j = _node_index(self.grid.ys, y, "y")
        return self.values[i, j]

    def row(self, y):
        """Trace along the horizontal line through grid node y."""
        return self.values[:, _node_index(self.grid.ys, y, "y")]

    def column(self, x):
        return self.values[_node_index(self.grid.xs, x, "x"), :]

    def __add__(self, other):
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")
        s1, s2 = self.sampler, other.sampler
        sampler = None
        if s1 is not None and s2 is not None:
            sampler = _SumSampler(s1, s2)
        return Field(self.grid, self.values + other.values, f"({self.meta})+({other.meta})", sampler)

    def evaluator(self):
        """Callable u(x, y) on the grid rectangle: the sampler when present,
        bilinear interpolation of the node values otherwise."""
        return FieldEvaluator(self)

    def to_csv(self, path, comments=()):
        write_atomic(path, field_csv_text(self, comments))


def _node_index(axis, v, name):
    i = int(np.argmin(np.abs(axis - v)))
    if abs(axis[i] - v) > 1e-12 * max(1.0, abs(v)):
        raise DomainError(f"{name} = {v!r} is not a grid node")
    return i


class _SumSampler:
    def __init__(self, a, b):
        self.a, self.b = a, b
        self.x_breaks = tuple(getattr(a, "x_breaks", ())) + tuple(getattr(b, "x_breaks", ()))
        self.y_breaks = tuple(getattr(a, "y_breaks", ())) + tuple(getattr(b, "y_breaks", ()))

    def __call__(self, x, y):
        return self.a(x, y) + self.b(x, y)


class FieldEvaluator:
    """Point evaluation of a Field inside its grid rectangle.

    Raises DomainError for points outside the rectangle.
    """

    def __init__(self, field):
        self.field = field
        s = field.sampler
        self.x_breaks = tuple(getattr(s, "x_breaks", ())) if s is not None else tuple(field.grid.xs)
        self.y_breaks = tuple(getattr(s, "y_breaks", ())) if s is not None else tuple(field.grid.ys)
        self.exact = s is not None

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        grid = self.field.grid
        if not np.all(grid.contains(x, y)):
            raise DomainError("requested point lies outside the field's grid")
        if self.exact:
            return np.asarray(self.field.sampler(x, y), dtype=complex)
        return bilinear(grid, self.field.values, x, y)


def bilinear(grid, values, x, y):
    xs, ys = grid.xs, grid.ys

    def locate(axis, v):
        if axis.size == 1:
            return np.zeros(v.shape, dtype=int), np.zeros(v.shape)
        i = np.clip(np.searchsorted(axis, v, side="right") - 1, 0, axis.size - 2)
        t = np.clip((v - axis[i]) / (axis[i + 1] - axis[i]), 0.0, 1.0)
        return i, t

    i, tx = locate(xs, x)
    j, ty = locate(ys, y)
    i1 = np.minimum(i + 1, xs.size - 1)
    j1 = np.minimum(j + 1, ys.size - 1)
    return (
        values[i, j] * (1 - tx) * (1 - ty)
        + values[i1, j] * tx * (1 - ty)
        + values[i, j1] * (1 - tx) * ty
        + values[i1, j1] * tx * ty
    )


def _fmt(v):
    return format(float(v), ".17g")


def field_csv_text(field, comments=()):
    nx, ny = field.grid.shape
    lines = [f"# grid nx={nx} ny={ny}"]
    if field.meta:
        lines.append(f"# meta {field.meta}")
    lines.extend(f"# {c}" for c in comments)
    lines.append("x,y,re,im")
    xs, ys, vals = field.grid.xs, field.grid.ys, field.values
    for j in range(ny):
        for i in range(nx):
            v = vals[i, j]
            lines.append(f"{_fmt(xs[i])},{_fmt(ys[j])},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def read_field_csv(path):
    meta = ""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# meta "):
                    meta = line[len("# meta "):]
                continue
            if line.startswith("x,"):
                continue
            rows.append([float(p) for p in line.split(",")])
    data = np.asarray(rows)
    if data.ndim != 2 or data.shape[1] != 4:
        raise ValueError(f"{path}: expected x,y,re,im rows")
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    if xs.size * ys.size != data.shape[0]:
        raise ValueError(f"{path}: rows do not form a tensor grid")
    grid = Grid(xs, ys)
    vals = np.empty(grid.shape, dtype=complex)
    i = np.searchsorted(xs, data[:, 0])
    j = np.searchsorted(ys, data[:, 1])
    vals[i, j] = data[:, 2] + 1j * data[:, 3]
    return Field(grid, vals, meta)


def write_atomic(path, text):
    """Write via a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
