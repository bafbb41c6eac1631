# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Tensor grids over boxes and polytopes, and functions sampled on them
"""

from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from cli.errors import GridMismatchError, ValidationError
from constants.numeric import CONVEXITY_RTOL, SUPERSAMPLING
from toric.polytope import LatticePolytope


class Grid:
    """
    Nodes of a tensor grid with uniform spacing per axis, restricted by a mask.

    When a polytope is given the mask is the set of nodes in P and the quadrature weights integrate
    over P; otherwise the mask is the whole box.
    """

    def __init__(self, axes: Sequence[np.ndarray], polytope: Optional[LatticePolytope] = None,
                 mask: Optional[np.ndarray] = None):
        self.axes = tuple(np.asarray(a, dtype=float) for a in axes)
        if len(self.axes) not in (1, 2):
            raise ValidationError(f"grids have 1 or 2 axes, got {len(self.axes)}")
        for axis in self.axes:
            if axis.ndim != 1 or axis.size < 2:
                raise ValidationError("resolution ≥ 2 required on every axis")
            steps = np.diff(axis)
            if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9):
                raise ValidationError("grid axes must be increasing with uniform spacing")
            axis.setflags(write=False)
        if polytope is not None and polytope.dim != len(self.axes):
            raise GridMismatchError(f"polytope of dimension {polytope.dim} on a {len(self.axes)}-axis grid")
        self.polytope = polytope
        if mask is None:
            mask = np.ones(self.shape, dtype=bool) if polytope is None else \
                polytope.contains(self.nodes, tol=1e-12 * self.spacing.max()).reshape(self.shape)
        mask = np.asarray(mask, dtype=bool).reshape(self.shape)
        if not np.any(mask):
            raise ValidationError("grid mask selects no node")
        mask.setflags(write=False)
        self.mask = mask

    ###
    # CONSTRUCTORS
    ###

    @classmethod
    def box(cls, low: float, high: float, resolution: int, dim: int = 1) -> 'Grid':
        if not high > low:
            raise ValidationError(f"box must have low < high, got [{low!r}, {high!r}]")
        return cls([np.linspace(low, high, resolution)] * dim)

    @classmethod
    def over_polytope(cls, p: LatticePolytope, resolution: int) -> 'Grid':
        low, high = p.bounding_box
        return cls([np.linspace(lo, hi, resolution) for lo, hi in zip(low, high)], polytope=p)

    @classmethod
    def lattice(cls, p: LatticePolytope, scale: int) -> 'Grid':
        """
        Nodes (1/K)·ℤⁿ, so that the nodes of P are the lattice points of K·P divided by K.
        """
        low, high = p.bounding_box
        axes = [np.arange(np.floor(lo * scale), np.ceil(hi * scale) + 1) / scale for lo, hi in zip(low, high)]
        return cls(axes, polytope=p)

    ###
    # GEOMETRY
    ###

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.axes)

    @cached_property
    def spacing(self) -> np.ndarray:
        return np.array([a[1] - a[0] for a in self.axes])

    @cached_property
    def nodes(self) -> np.ndarray:
        """
        All nodes, one per row, in C order of shape.
        """
        mesh = np.meshgrid(*self.axes, indexing='ij')
        return np.stack([m.reshape(-1) for m in mesh], axis=1)

    @cached_property
    def masked_nodes(self) -> np.ndarray:
        return self.nodes[self.mask.reshape(-1)]

    def compatible(self, other: 'Grid') -> bool:
        return (self is other
                or (self.shape == other.shape
                    and all(np.array_equal(a, b) for a, b in zip(self.axes, other.axes))
                    and np.array_equal(self.mask, other.mask)))

    def check_compatible(self, other: 'Grid') -> None:
        if not self.compatible(other):
            raise GridMismatchError("functions live on different grids")

    ###
    # QUADRATURE
    ###

    @cached_property
    def cell_areas(self) -> np.ndarray:
        """
        Measure of the intersection of each node's cell with the domain, zero outside the mask.

        Cells are the dual cells of the nodes, clipped to the box. In 1-D this is the trapezoid rule.
        Boundary cells of a 2-D polytope are supersampled.
        """
        if self.dim == 1:
            areas = self._cells_1d()
        else:
            areas = self._cells_2d()
        return np.where(self.mask, areas, 0.0)

    def _cells_1d(self) -> np.ndarray:
        x = self.axes[0]
        low, high = (x[0], x[-1]) if self.polytope is None else (float(self.polytope.vertices[0][0]),
                                                                 float(self.polytope.vertices[-1][0]))
        edges = np.concatenate(([x[0]], (x[1:] + x[:-1]) / 2, [x[-1]]))
        edges = np.clip(edges, low, high)
        return np.diff(edges)

    def _cells_2d(self) -> np.ndarray:
        hx, hy = self.spacing
        widths = [np.diff(np.concatenate(([a[0]], (a[1:] + a[:-1]) / 2, [a[-1]]))) for a in self.axes]
        areas = np.outer(*widths)
        if self.polytope is None:
            return areas
        nodes = self.nodes
        corners = [nodes + np.array([sx * hx / 2, sy * hy / 2]) for sx in (-1, 1) for sy in (-1, 1)]
        full = np.all([self.polytope.contains(c) for c in corners], axis=0)
        touching = self.polytope.contains(nodes, tol=float(np.hypot(hx, hy)) * 2)
        boundary = np.flatnonzero(touching & ~full)

        offsets = (np.arange(SUPERSAMPLING) + 0.5) / SUPERSAMPLING - 0.5
        sub = np.stack([m.reshape(-1) for m in np.meshgrid(offsets * hx, offsets * hy, indexing='ij')], axis=1)
        samples = nodes[boundary][:, None, :] + sub[None, :, :]
        # clip subsamples to the box, a half-cell outside the outer nodes does not exist
        low = np.array([a[0] for a in self.axes])
        high = np.array([a[-1] for a in self.axes])
        inside_box = np.all((samples >= low) & (samples <= high), axis=-1)
        flat = samples.reshape(-1, 2)
        strict = self.polytope.contains(flat, tol=-1e-12).reshape(inside_box.shape) & inside_box
        closed = self.polytope.contains(flat, tol=1e-12).reshape(inside_box.shape) & inside_box
        # subsamples on a facet count half
        fractions = (strict.mean(axis=1) + closed.mean(axis=1)) / 2

        result = np.where(full, areas.reshape(-1), 0.0)
        result[boundary] = fractions * hx * hy
        return result.reshape(self.shape)

    @cached_property
    def weights(self) -> np.ndarray:
        """
        Normalized quadrature weights (sum 1) for the uniform probability measure on the domain.
        """
        areas = self.cell_areas
        total = areas.sum()
        if total <= 0:
            raise ValidationError("grid domain has zero measure")
        return areas / total

    def mean(self, values: np.ndarray) -> float:
        values = np.asarray(values, dtype=float).reshape(self.shape)
        return float(np.sum(self.weights[self.mask] * values[self.mask]))

    def __repr__(self):
        return f"Grid(shape={self.shape!r}, polytope={self.polytope!r})"


class GridFunction:
    """
    Real values at the nodes of a grid, +inf outside its mask.
    """

    def __init__(self, grid: Grid, values):
        values = np.array(values, dtype=float).reshape(grid.shape)
        if not np.all(np.isfinite(values[grid.mask])):
            raise ValidationError("grid function values must be finite on the domain")
        values[~grid.mask] = np.inf
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def sample(cls, grid: Grid, function) -> 'GridFunction':
        """
        Evaluates function on the masked nodes, passed as an (N, dim) array.
        """
        values = np.full(grid.shape, np.inf)
        values[grid.mask] = np.asarray(function(grid.masked_nodes), dtype=float).reshape(-1)
        return cls(grid, values)

    @property
    def dim(self) -> int:
        return self.grid.dim

    @property
    def masked_values(self) -> np.ndarray:
        return self.values[self.grid.mask]

    def mean(self) -> float:
        return self.grid.mean(self.values)

    def _combine(self, other, operation) -> 'GridFunction':
        if isinstance(other, GridFunction):
            self.grid.check_compatible(other.grid)
            other = np.where(self.grid.mask, other.values, 0.0)
        base = np.where(self.grid.mask, self.values, 0.0)
        return GridFunction(self.grid, operation(base, other))

    def __add__(self, other) -> 'GridFunction':
        return self._combine(other, np.add)

    def __sub__(self, other) -> 'GridFunction':
        return self._combine(other, np.subtract)

    def __mul__(self, scalar: float) -> 'GridFunction':
        return self._combine(scalar, np.multiply)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> 'GridFunction':
        return self * -1.0

    def to_csv(self, path: Path) -> None:
        """
        One row per domain node: axis0[,axis1],value.
        """
        header = ','.join([f'axis{i}' for i in range(self.dim)] + ['value'])
        data = np.column_stack([self.grid.masked_nodes, self.masked_values])
        np.savetxt(path, data, delimiter=',', header=header, comments='', fmt='%.17g')

    @classmethod
    def from_csv(cls, path: Path, polytope: Optional[LatticePolytope] = None) -> 'GridFunction':
        data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
        if data.shape[1] not in (2, 3):
            raise ValidationError(f"expected 2 or 3 columns in {str(path)!r}, got {data.shape[1]}")
        dim = data.shape[1] - 1
        axes = [np.unique(data[:, i]) for i in range(dim)]
        indices = tuple(np.searchsorted(axes[i], data[:, i]) for i in range(dim))
        mask = np.zeros(tuple(a.size for a in axes), dtype=bool)
        mask[indices] = True
        values = np.full(mask.shape, np.inf)
        values[indices] = data[:, -1]
        return cls(Grid(axes, polytope=polytope, mask=mask), values)

    def __repr__(self):
        return f"{type(self).__name__}({self.grid!r})"


class ConvexGridFunction(GridFunction):
    """
    A grid function whose values lie on or above the lower convex hull of their graph.

    The check runs on construction unless check=False, in which case certified is False.
    """

    def __init__(self, grid: Grid, values, check: bool = True):
        super().__init__(grid, values)
        self.certified = False
        if check:
            violation = convexity_violation(self)
            scale = 1.0 + float(np.max(np.abs(self.masked_values)))
            if violation > CONVEXITY_RTOL * scale:
                raise ValidationError(f"function is not convex: defect {violation:.3e}")
            self.certified = True


def lower_hull_1d(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Indices of the vertices of the lower convex hull of the points (x, y), x increasing.
    """
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) > 1:
            a, b = hull[-2], hull[-1]
            # drop b when it lies on or above the chord from a to i
            if (y[b] - y[a]) * (x[i] - x[a]) >= (y[i] - y[a]) * (x[b] - x[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return np.array(hull)


def convexity_violation(f: GridFunction) -> float:
    """
    Largest amount by which f rises above a chord: height over the lower hull in 1-D, negative second
    differences along the axes and both diagonals in 2-D.
    """
    values = np.where(f.grid.mask, f.values, np.nan)
    if f.dim == 1:
        x = f.grid.axes[0][f.grid.mask]
        y = f.masked_values
        if y.size < 3:
            return 0.0
        hull = lower_hull_1d(x, y)
        return float(np.max(y - np.interp(x, x[hull], y[hull])))
    worst = 0.0
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        rows, cols = values.shape
        i0, i1 = max(0, -2 * di), rows - max(0, 2 * di)
        j0, j1 = max(0, -2 * dj), cols - max(0, 2 * dj)
        if i1 <= i0 or j1 <= j0:
            continue
        left = values[i0:i1, j0:j1]
        middle = values[i0 + di:i1 + di, j0 + dj:j1 + dj]
        right = values[i0 + 2 * di:i1 + 2 * di, j0 + 2 * dj:j1 + 2 * dj]
        second = left + right - 2 * middle
        second = second[np.isfinite(second)]
        if second.size:
            worst = max(worst, float(-np.min(second)))
    return worst
