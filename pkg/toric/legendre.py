# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Discrete Legendre transforms and convex envelopes

g(ξ) = max over grid nodes of ⟨ξ, x⟩ - f(x). The maximum over nodes is attained on a vertex of the
lower hull of the graph, so each 1-D conjugate is a hull followed by a binary search over its edge
slopes. In 2-D the inner axis is done that way row by row and the outer axis by a vectorized max.
"""

from typing import Callable, Optional

import numpy as np

from cli.errors import SlopeCoverageError, ValidationError
from cli.logger import Logger
from constants.numeric import (
    CONVEXITY_RTOL,
    DEFAULT_BOX,
    INTERIOR_MARGIN,
    MAX_BOX_DOUBLINGS,
    SLOPE_MARGIN,
)
from toric.grid import ConvexGridFunction, Grid, GridFunction, convexity_violation, lower_hull_1d
from toric.polytope import LatticePolytope

CHUNK = 8192


def _conjugate_1d(x: np.ndarray, y: np.ndarray, slopes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    (max_i s·x_i - y_i, argmax i) for every slope s.
    """
    hull = lower_hull_1d(x, y)
    hx, hy = x[hull], y[hull]
    edges = np.diff(hy) / np.diff(hx)
    vertex = np.searchsorted(edges, slopes, side='left')
    return slopes * hx[vertex] - hy[vertex], hull[vertex]


def _conjugate(f: GridFunction, slopes: np.ndarray) -> tuple[np.ndarray, tuple[np.ndarray, ...]]:
    """
    Conjugate of f at the given slopes (K, dim) with the grid multi-index of each maximizer.
    """
    grid = f.grid
    if f.dim == 1:
        columns = np.flatnonzero(grid.mask)
        values, index = _conjugate_1d(grid.axes[0][columns], f.values[columns], slopes[:, 0])
        return values, (columns[index],)

    x1, x2 = grid.axes
    # one lower hull per row, reused by every chunk of slopes
    rows = []
    for i in range(x1.size):
        columns = np.flatnonzero(grid.mask[i])
        if columns.size:
            hull = columns[lower_hull_1d(x2[columns], f.values[i, columns])]
            rows.append((i, hull, np.diff(f.values[i, hull]) / np.diff(x2[hull])))

    count = slopes.shape[0]
    values = np.empty(count)
    maximizers = (np.empty(count, dtype=np.int64), np.empty(count, dtype=np.int64))
    # memory stays at x1.size × CHUNK whatever the number of slopes
    for start in range(0, count, CHUNK):
        chunk = slopes[start:start + CHUNK]
        inner = np.full((x1.size, len(chunk)), -np.inf)
        inner_index = np.zeros((x1.size, len(chunk)), dtype=np.int64)
        for i, hull, edges in rows:
            vertex = hull[np.searchsorted(edges, chunk[:, 1], side='left')]
            inner[i] = chunk[:, 1] * x2[vertex] - f.values[i, vertex]
            inner_index[i] = vertex
        total = x1[:, None] * chunk[None, :, 0] + inner
        best = np.argmax(total, axis=0)
        columns = np.arange(len(chunk))
        values[start:start + len(chunk)] = total[best, columns]
        maximizers[0][start:start + len(chunk)] = best
        maximizers[1][start:start + len(chunk)] = inner_index[best, columns]
    return values, maximizers


def _check_coverage(f: GridFunction, slopes: np.ndarray, index: tuple[np.ndarray, ...], p: LatticePolytope) -> None:
    on_edge = np.zeros(slopes.shape[0], dtype=bool)
    for axis, i in enumerate(index):
        on_edge |= (i == 0) | (i == f.grid.shape[axis] - 1)
    offending = on_edge & p.interior_mask(slopes, INTERIOR_MARGIN)
    if np.any(offending):
        first = slopes[np.argmax(offending)]
        raise SlopeCoverageError(f"slope {first.tolist()!r} is maximized on the box boundary: "
                                 f"enlarge the box so that its boundary slopes bracket P")


def legendre_at(f: GridFunction, points, coverage: Optional[LatticePolytope] = None) -> np.ndarray:
    """
    Conjugate of f at arbitrary slopes, one per row of points.

    :param coverage: raise SlopeCoverageError when a slope inside this polytope (away from its boundary)
                     is maximized on the box boundary
    """
    slopes = np.asarray(points, dtype=float).reshape(-1, f.dim)
    values, index = _conjugate(f, slopes)
    if coverage is not None:
        _check_coverage(f, slopes, index, coverage)
    return values


def discrete_legendre(f: GridFunction, target: Grid, check_coverage: bool = True) -> ConvexGridFunction:
    """
    g on the masked nodes of target. The coverage check applies when target carries a polytope.
    """
    if target.dim != f.dim:
        raise ValidationError(f"cannot conjugate a {f.dim}-D function onto a {target.dim}-D grid")
    coverage = target.polytope if check_coverage else None
    values = np.full(target.shape, np.inf)
    values[target.mask] = legendre_at(f, target.masked_nodes, coverage)
    return ConvexGridFunction(target, values)


def convex_envelope(f: GridFunction, slopes: Optional[int] = None) -> ConvexGridFunction:
    """
    f**, the largest convex minorant of f on its grid.

    Exact lower hull in 1-D. In 2-D a double conjugate through a slope grid spanning the difference
    quotients of f, which is exact up to the slope resolution. The result never exceeds f.

    :param slopes: slope nodes per axis in 2-D, the grid's own resolution by default
    """
    scale = 1.0 + float(np.max(np.abs(f.masked_values)))
    if convexity_violation(f) <= CONVEXITY_RTOL * scale:
        return ConvexGridFunction(f.grid, f.values)
    if f.dim == 1:
        x = f.grid.axes[0][f.grid.mask]
        y = f.masked_values
        hull = lower_hull_1d(x, y)
        values = np.full(f.grid.shape, np.inf)
        values[f.grid.mask] = np.interp(x, x[hull], y[hull])
        return ConvexGridFunction(f.grid, values)

    logger = Logger()
    logger.log_debug(f"Convex envelope of {f!r} by double conjugate")
    axes = []
    for axis in range(2):
        differences = np.diff(f.values, axis=axis) / f.grid.spacing[axis]
        differences = differences[np.isfinite(differences)]
        low, high = float(differences.min()), float(differences.max())
        pad = SLOPE_MARGIN * (high - low) + 1e-12
        axes.append(np.linspace(low - pad, high + pad, slopes or f.grid.shape[axis]))
    slope_grid = Grid(axes)
    conjugate = GridFunction(slope_grid, legendre_at(f, slope_grid.nodes))
    values = np.full(f.grid.shape, np.inf)
    values[f.grid.mask] = np.minimum(legendre_at(conjugate, f.grid.masked_nodes), f.masked_values)
    return ConvexGridFunction(f.grid, values)


def _boundary_nodes(grid: Grid) -> np.ndarray:
    on_edge = np.zeros(grid.shape, dtype=bool)
    for axis in range(grid.dim):
        index = [slice(None)] * grid.dim
        index[axis] = 0
        on_edge[tuple(index)] = True
        index[axis] = -1
        on_edge[tuple(index)] = True
    return grid.nodes[on_edge.reshape(-1)]


def slope_coverage_box(function: Callable[[np.ndarray], np.ndarray], p: LatticePolytope,
                       box: tuple[float, float] = DEFAULT_BOX, resolution: int = 257) -> tuple[float, float]:
    """
    Smallest box among box, 2·box, 4·box, … whose boundary gradients all stay out of the interior of P.

    Interior means farther than the interior margin from ∂P: those slopes are then maximized strictly
    inside the box.
    """
    logger = Logger()
    low, high = box
    for doubling in range(MAX_BOX_DOUBLINGS + 1):
        grid = Grid.box(low, high, resolution, p.dim)
        nodes = _boundary_nodes(grid)
        h = float(grid.spacing[0])
        gradient = np.stack([(function(nodes + h * e) - function(nodes - h * e)) / (2 * h)
                             for e in np.eye(p.dim)], axis=-1)
        if not np.any(p.interior_mask(gradient, INTERIOR_MARGIN)):
            if doubling:
                logger.log_info(f"Box enlarged to [{low!r}, {high!r}] for slope coverage")
            return low, high
        low, high = 2 * low, 2 * high
    raise SlopeCoverageError(f"no box up to [{low / 2!r}, {high / 2!r}] has boundary slopes bracketing {p!r}")
