# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Rational polytopes in dimension 1 and 2 and their lattice points

Facets are kept as ⟨u, x⟩ ≤ c with u a primitive outward integer normal and c rational, so that
membership of lattice points in a dilate kP is decided in integer arithmetic.
"""

import math
from fractions import Fraction
from functools import cached_property
from typing import Any, Optional, Sequence

import numpy as np

from cli.errors import DegeneratePolytopeError, ValidationError

Facet = tuple[tuple[int, ...], Fraction]


def as_fraction(value: Any) -> Fraction:
    if isinstance(value, float) and not math.isfinite(value):
        raise ValidationError(f"vertex coordinates must be finite, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"not a rational number: {value!r}") from None


def _cross(o: Sequence[Fraction], a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """
    Counter-clockwise hull vertices by the monotone chain, exact on rationals. Collinear points dropped.
    """
    points = sorted(set(points))
    if len(points) < 3:
        return points
    lower: list = []
    for p in points:
        while len(lower) > 1 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(points):
        while len(upper) > 1 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _primitive(normal: Sequence[Fraction]) -> tuple[int, ...]:
    denominator = math.lcm(*(c.denominator for c in normal))
    integers = [int(c * denominator) for c in normal]
    divisor = math.gcd(*integers)
    return tuple(i // divisor for i in integers)


def _normalized(normal: Sequence[Any], offset: Any) -> Facet:
    fractions = [as_fraction(c) for c in normal]
    if all(c == 0 for c in fractions):
        raise ValidationError("facet normal must be non-zero")
    primitive = _primitive(fractions)
    # the scale relating the given normal to its primitive form
    index = next(i for i, c in enumerate(primitive) if c != 0)
    scale = fractions[index] / primitive[index]
    return primitive, as_fraction(offset) / scale


class LatticePolytope:
    """
    A full-dimensional polytope with rational vertices in ℝ¹ or ℝ².

    The optional half-space representation is checked against the one derived from the vertices.
    """

    def __init__(self, vertices: Sequence[Sequence[Any]], inequalities: Optional[Sequence[Sequence[Any]]] = None):
        points = [tuple(as_fraction(c) for c in np.atleast_1d(np.asarray(v, dtype=object))) for v in vertices]
        if not points:
            raise DegeneratePolytopeError("a polytope needs vertices: volume > 0")
        dims = {len(p) for p in points}
        if len(dims) != 1:
            raise ValidationError("vertices must all have the same dimension")
        self.dim = dims.pop()
        if self.dim not in (1, 2):
            raise ValidationError(f"only dimensions 1 and 2 are supported, got {self.dim}")
        if self.dim == 1:
            low, high = min(points), max(points)
            self.vertices = [low, high] if low != high else [low]
        else:
            self.vertices = convex_hull_2d(points)
        if self.volume <= 0:
            raise DegeneratePolytopeError(f"polytope must be full-dimensional: volume > 0, got {self.volume}")
        if inequalities is not None:
            given = {_normalized(row[:-1], row[-1]) for row in inequalities}
            if given != set(self.facets):
                raise ValidationError("vertex and half-space representations disagree")

    ###
    # CONSTRUCTORS
    ###

    @classmethod
    def interval(cls, low: Any, high: Any) -> 'LatticePolytope':
        return cls([[low], [high]])

    @classmethod
    def simplex(cls, dim: int, scale: Any = 1) -> 'LatticePolytope':
        """
        conv{0, s·e₁, …, s·e_n}
        """
        scale = as_fraction(scale)
        vertices = [[0] * dim]
        for i in range(dim):
            vertex = [Fraction(0)] * dim
            vertex[i] = scale
            vertices.append(vertex)
        return cls(vertices)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> 'LatticePolytope':
        """
        {"vertices": [["p/q", ...], ...]}, {"interval": [a, b]} or {"simplex": n, "scale": s}.
        """
        if 'vertices' in obj:
            return cls(obj['vertices'], obj.get('inequalities'))
        if 'interval' in obj:
            low, high = obj['interval']
            return cls.interval(low, high)
        if 'simplex' in obj:
            return cls.simplex(int(obj['simplex']), obj.get('scale', 1))
        raise ValidationError("polytope: expected one of 'vertices', 'interval', 'simplex'")

    def to_json(self) -> dict[str, Any]:
        return {'vertices': [[str(c) for c in v] for v in self.vertices]}

    ###
    # GEOMETRY
    ###

    @cached_property
    def facets(self) -> list[Facet]:
        if self.dim == 1:
            low, high = self.vertices[0][0], self.vertices[-1][0]
            return [((1,), high), ((-1,), -low)]
        facets = []
        count = len(self.vertices)
        for i in range(count):
            p, q = self.vertices[i], self.vertices[(i + 1) % count]
            normal = _primitive((q[1] - p[1], p[0] - q[0]))
            facets.append((normal, normal[0] * p[0] + normal[1] * p[1]))
        return facets

    @cached_property
    def volume(self) -> Fraction:
        if self.dim == 1:
            return self.vertices[-1][0] - self.vertices[0][0]
        if len(self.vertices) < 3:
            return Fraction(0)
        count = len(self.vertices)
        twice = sum(_cross((Fraction(0), Fraction(0)), self.vertices[i], self.vertices[(i + 1) % count])
                    for i in range(count))
        return twice / 2

    @cached_property
    def centroid(self) -> tuple[Fraction, ...]:
        if self.dim == 1:
            return ((self.vertices[0][0] + self.vertices[-1][0]) / 2,)
        count = len(self.vertices)
        cx = cy = Fraction(0)
        for i in range(count):
            p, q = self.vertices[i], self.vertices[(i + 1) % count]
            cross = p[0] * q[1] - q[0] * p[1]
            cx += (p[0] + q[0]) * cross
            cy += (p[1] + q[1]) * cross
        return cx / (6 * self.volume), cy / (6 * self.volume)

    @cached_property
    def vertex_array(self) -> np.ndarray:
        return np.array([[float(c) for c in v] for v in self.vertices])

    @cached_property
    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertex_array.min(axis=0), self.vertex_array.max(axis=0)

    @cached_property
    def _facet_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        normals = np.array([u for u, _ in self.facets], dtype=float)
        offsets = np.array([float(c) for _, c in self.facets])
        return normals, offsets

    @cached_property
    def widths(self) -> np.ndarray:
        """
        Width of P along each facet normal.
        """
        normals, _ = self._facet_arrays
        heights = self.vertex_array @ normals.T
        return heights.max(axis=0) - heights.min(axis=0)

    def contains(self, points, tol: float = 1e-12) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        normals, offsets = self._facet_arrays
        return np.all(points @ normals.T <= offsets + tol, axis=1)

    def interior_mask(self, points, margin: float) -> np.ndarray:
        """
        Points at distance at least margin·width from every facet, measured along its normal.
        """
        points = np.asarray(points, dtype=float).reshape(-1, self.dim)
        normals, offsets = self._facet_arrays
        return np.all(points @ normals.T <= offsets - margin * self.widths, axis=1)

    def __repr__(self):
        vertices = ', '.join('(' + ', '.join(str(c) for c in v) + ')' for v in self.vertices)
        return f"LatticePolytope([{vertices}])"


def lattice_points(p: LatticePolytope, k: int) -> np.ndarray:
    """
    The integer points of kP in lexicographic order, one per row.
    """
    if k < 1:
        raise ValidationError(f"k ≥ 1 required, got {k!r}")
    low = [math.ceil(k * min(v[i] for v in p.vertices)) for i in range(p.dim)]
    high = [math.floor(k * max(v[i] for v in p.vertices)) for i in range(p.dim)]
    axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in zip(low, high)]
    grid = np.stack([a.reshape(-1) for a in np.meshgrid(*axes, indexing='ij')], axis=1)
    inside = np.ones(len(grid), dtype=bool)
    for normal, offset in p.facets:
        # q·⟨u, α⟩ ≤ k·p for offset p/q, exact in integers
        inside &= offset.denominator * (grid @ np.array(normal, dtype=np.int64)) <= k * offset.numerator
    points = grid[inside]
    order = np.lexsort(points.T[::-1])
    return points[order]


def line_bundle_volume(p: LatticePolytope) -> Fraction:
    """
    n!·vol(P), the limit of n!·n_k/kⁿ.
    """
    return math.factorial(p.dim) * p.volume


def ehrhart_ratio(p: LatticePolytope, k: int) -> float:
    return math.factorial(p.dim) * len(lattice_points(p, k)) / k ** p.dim
