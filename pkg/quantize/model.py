# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Toric models of a big line bundle with a torus-invariant metric

The metric is given by a potential φ on a box of log coordinates or by a symplectic potential g on
the polytope. The other side is derived by a discrete Legendre transform.
"""

import hashlib
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from cli.errors import GridMismatchError, ValidationError
from cli.logger import Logger
from constants.numeric import DEFAULT_BOX, DEFAULT_GRID_1D, DEFAULT_GRID_2D, INTERIOR_MARGIN
from toric.grid import ConvexGridFunction, Grid, GridFunction
from toric.legendre import discrete_legendre, legendre_at, slope_coverage_box
from toric.polytope import LatticePolytope

POTENTIAL = 'potential'
SYMPLECTIC = 'symplectic'
CONSISTENCY_TOL = 1e-3


def default_resolution(dim: int) -> int:
    return DEFAULT_GRID_1D if dim == 1 else DEFAULT_GRID_2D


@dataclass(frozen=True, eq=False)
class ToricBundleModel:
    polytope: LatticePolytope
    potential: Optional[GridFunction] = None
    symplectic: Optional[GridFunction] = None
    authoritative: str = POTENTIAL

    def __post_init__(self):
        if self.authoritative not in (POTENTIAL, SYMPLECTIC):
            raise ValidationError(f"authoritative side must be {POTENTIAL!r} or {SYMPLECTIC!r}, "
                                  f"got {self.authoritative!r}")
        if getattr(self, self.authoritative) is None:
            raise ValidationError(f"the authoritative {self.authoritative} is missing")
        for function in (self.potential, self.symplectic):
            if function is not None and function.dim != self.polytope.dim:
                raise GridMismatchError(f"{function!r} does not match a {self.polytope.dim}-D polytope")
        if self.potential is not None and self.potential.grid.polytope is not None:
            raise ValidationError("the potential lives on a box, not on a polytope grid")
        if self.symplectic is not None:
            if self.symplectic.grid.polytope is None:
                raise ValidationError("the symplectic potential lives on a grid over P")
            if not np.all(np.isfinite(self.symplectic.masked_values)):
                raise ValidationError("symplectic potential must be finite on P")
        if self.potential is not None and self.symplectic is not None:
            defect = self.consistency_defect()
            if defect > CONSISTENCY_TOL:
                raise ValidationError(f"potential and symplectic potential disagree by {defect:.3e}")

    ###
    # CONSTRUCTORS
    ###

    @classmethod
    def from_potential(cls, p: LatticePolytope, function: Callable[[np.ndarray], np.ndarray],
                       box: Optional[tuple[float, float]] = None,
                       resolution: Optional[int] = None) -> 'ToricBundleModel':
        """
        Samples φ on a box whose boundary slopes bracket P, enlarged from the default box when needed.
        """
        box = slope_coverage_box(function, p) if box is None else box
        resolution = default_resolution(p.dim) if resolution is None else resolution
        grid = Grid.box(box[0], box[1], resolution, p.dim)
        return cls(p, potential=GridFunction.sample(grid, function))

    @classmethod
    def from_symplectic(cls, p: LatticePolytope, function: Callable[[np.ndarray], np.ndarray],
                        resolution: Optional[int] = None) -> 'ToricBundleModel':
        resolution = default_resolution(p.dim) if resolution is None else resolution
        g = GridFunction.sample(Grid.over_polytope(p, resolution), function)
        return cls(p, symplectic=ConvexGridFunction(g.grid, g.values), authoritative=SYMPLECTIC)

    ###
    # BOTH SIDES
    ###

    @cached_property
    def box(self) -> Grid:
        if self.potential is not None:
            return self.potential.grid
        return Grid.box(DEFAULT_BOX[0], DEFAULT_BOX[1], default_resolution(self.dim), self.dim)

    @cached_property
    def phi(self) -> GridFunction:
        """
        φ on the box. Derived from g it is the envelope side, hence convex.
        """
        if self.potential is not None:
            return self.potential
        logger = Logger()
        logger.log_debug(f"Potential of {self!r} from its symplectic side")
        values = legendre_at(self.symplectic, self.box.nodes).reshape(self.box.shape)
        return ConvexGridFunction(self.box, values)

    @cached_property
    def g(self) -> ConvexGridFunction:
        if self.symplectic is not None:
            return ConvexGridFunction(self.symplectic.grid, self.symplectic.values)
        logger = Logger()
        logger.log_debug(f"Symplectic potential of {self!r}")
        resolution = self.potential.grid.shape[0]
        return discrete_legendre(self.potential, Grid.over_polytope(self.polytope, resolution))

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def consistency_defect(self) -> float:
        """
        Largest |g - φ*| on nodes away from ∂P.
        """
        derived = discrete_legendre(self.potential, self.symplectic.grid)
        interior = self.polytope.interior_mask(self.symplectic.grid.masked_nodes, INTERIOR_MARGIN)
        difference = np.abs(derived.masked_values - self.symplectic.masked_values)[interior]
        return float(difference.max()) if difference.size else 0.0

    def shifted(self, constant: float) -> 'ToricBundleModel':
        """
        φ + c, equivalently g - c.
        """
        if self.authoritative == POTENTIAL:
            return ToricBundleModel(self.polytope, potential=self.potential + constant)
        return ToricBundleModel(self.polytope, symplectic=self.symplectic - constant, authoritative=SYMPLECTIC)

    @cached_property
    def fingerprint(self) -> str:
        """
        sha256 of the polytope and the authoritative samples.
        """
        function = getattr(self, self.authoritative)
        digest = hashlib.sha256()
        digest.update(repr(self.polytope.to_json()).encode('utf-8'))
        for axis in function.grid.axes:
            digest.update(axis.tobytes())
        digest.update(np.ascontiguousarray(function.values).tobytes())
        return digest.hexdigest()

    def __repr__(self):
        return f"ToricBundleModel({self.polytope!r}, {self.authoritative})"
