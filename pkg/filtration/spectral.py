# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Spectral measure of a monomial filtration and the convergence of jumping measures to it
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from cli.errors import ValidationError
from cli.logger import Logger
from cli.table import ExperimentTable
from constants.numeric import ENVELOPE_SLOPES, FEKETE_LEVELS, FEKETE_TOL
from filtration.filtrations import FiltrationSpec
from filtration.jumps import jumping_data
from filtration.rays import ray_norm
from normspace.norms import check_exponent
from normspace.spectrum import dp_distance
from quantize.experiments import COLUMNS, check_levels, per_level
from quantize.model import ToricBundleModel
from quantize.norms import ban_norm, linear_growth_constant
from toric.grid import Grid, GridFunction, convexity_violation
from toric.legendre import convex_envelope
from toric.measures import Measure1D, pushforward


@dataclass(frozen=True, eq=False)
class ConcaveTransform:
    """
    The asymptotic jump function ξ ↦ lim e_K(Kξ)/K on the nodes (1/K)ℤⁿ ∩ P of the finest doubling
    level K, and its concave envelope over P.
    """
    limit: GridFunction
    speed: GridFunction
    scale: int
    fekete_defect: float
    bound: float

    @property
    def grid(self) -> Grid:
        return self.limit.grid

    @property
    def converged(self) -> bool:
        return self.fekete_defect <= FEKETE_TOL

    @cached_property
    def envelope_defect(self) -> float:
        """
        How far the envelope rises above the limit, 0 for concave limits.
        """
        return float(np.max(self.speed.masked_values - self.limit.masked_values))

    def moment(self, m: int) -> float:
        weights = self.grid.weights[self.grid.mask]
        return float(np.sum(weights * self.speed.masked_values ** m) / np.sum(weights))

    def lp_norm(self, p: float) -> float:
        values = np.abs(self.speed.masked_values)
        if np.isinf(p):
            return float(values.max())
        weights = self.grid.weights[self.grid.mask]
        return float((np.sum(weights * values ** p) / np.sum(weights)) ** (1 / p))

    def __repr__(self):
        return f"ConcaveTransform(scale={self.scale}, defect={self.fekete_defect:.3e})"


def doubling_scales(f: FiltrationSpec, levels: int = FEKETE_LEVELS) -> list[int]:
    scales = [2 ** j for j in range(levels + 1)]
    if f.levels is not None:
        scales = [K for K in scales if K in f.levels]
    if not scales:
        raise ValidationError(f"missing level: no level 2^j with j ≤ {levels} carries jumps")
    return scales


def _normalized_jumps(f: FiltrationSpec, K: int, nodes: np.ndarray) -> np.ndarray:
    return f.jumps_at(K, np.rint(nodes * K).astype(np.int64)) / K


def concave_transform(f: FiltrationSpec, levels: int = FEKETE_LEVELS) -> ConcaveTransform:
    """
    e_K(Kξ)/K is non-decreasing along K = 2^j for a submultiplicative filtration, and converges. The limit
    is read at the last level; the step from the level before it is the Fekete defect, flagged when it
    exceeds FEKETE_TOL.
    """
    logger = Logger()
    scales = doubling_scales(f, levels)
    bound = linear_growth_constant({K: float(np.max(np.abs(f.jumps(K)))) for K in scales})
    scale = scales[-1]
    grid = Grid.lattice(f.polytope, scale)
    values = np.full(grid.shape, np.inf)
    values[grid.mask] = _normalized_jumps(f, scale, grid.masked_nodes)
    limit = GridFunction(grid, values)

    defect = np.inf
    for coarse, fine in zip(scales, scales[1:]):
        nodes = Grid.lattice(f.polytope, coarse).masked_nodes
        step = _normalized_jumps(f, fine, nodes) - _normalized_jumps(f, coarse, nodes)
        if np.min(step) < -1e-9 * (1.0 + bound):
            raise ValidationError(f"jumps are not superadditive along levels {coarse!r} and {fine!r}")
        defect = float(np.max(step)) if fine == scale else defect
    if defect > FEKETE_TOL:
        logger.log_warning(f"Jump function not converged at level {scale!r}: Fekete defect {defect!r}")

    scale_values = 1.0 + float(np.max(np.abs(limit.masked_values)))
    if convexity_violation(-limit) <= 1e-12 * scale_values:
        speed = limit
    else:
        logger.log_warning(f"Jump function is not concave at level {scale!r}, taking its concave envelope")
        speed = -convex_envelope(-limit, slopes=ENVELOPE_SLOPES)
    return ConcaveTransform(limit, speed, scale, defect, bound)


def spectral_measure(m: ToricBundleModel, f: FiltrationSpec, bins: int,
                     levels: int = FEKETE_LEVELS, envelope: bool = True) -> Measure1D:
    """
    λ_*(normalized Lebesgue measure of P), λ the concave transform of f.

    :param envelope: False pushes forward the limit before the concave envelope is taken
    """
    if m.polytope.vertices != f.polytope.vertices:
        raise ValidationError("model and filtration must share their polytope")
    transform = concave_transform(f, levels)
    return pushforward(transform.speed if envelope else transform.limit, bins)


###
# EXPERIMENTS
###

def filtration_spectrum_experiment(m: ToricBundleModel, f: FiltrationSpec, ks: Sequence[int], moments: int = 4,
                                   levels: int = FEKETE_LEVELS, threads: int = 1) -> ExperimentTable:
    """
    Moments 1..M of the jumping measure of level k against those of the spectral measure, the latter
    integrated exactly against the quadrature of P instead of through a histogram.
    """
    if m.polytope.vertices != f.polytope.vertices:
        raise ValidationError("model and filtration must share their polytope")
    if moments < 1:
        raise ValidationError(f"moments ≥ 1 required, got {moments!r}")
    ks = check_levels(ks)
    logger = Logger()
    transform = concave_transform(f, levels)
    limits = [transform.moment(j) for j in range(1, moments + 1)]

    def rows(k: int) -> list[tuple]:
        normalized = jumping_data(f, k).normalized
        logger.log_info(f"Filtration spectrum: k={k!r}")
        values = [float(np.mean(normalized ** j)) for j in range(1, moments + 1)]
        return [(k, j, value, limit, abs(value - limit))
                for j, value, limit in zip(range(1, moments + 1), values, limits)]

    table_rows = [row for level in per_level(rows, ks, threads) for row in level]
    return ExperimentTable.from_rows(('k', 'moment', 'value', 'limit', 'gap'), table_rows,
                                     converged=transform.converged, fekete_defect=transform.fekete_defect,
                                     envelope_defect=transform.envelope_defect, bound=transform.bound)


def ray_speed_experiment(m: ToricBundleModel, f: FiltrationSpec, p: float, ks: Sequence[int],
                         levels: int = FEKETE_LEVELS, threads: int = 1) -> ExperimentTable:
    """
    d_p(Ban_k, ray of Ban_k at time 1)/k against the L^p norm of the spectral measure.
    """
    check_exponent(p)
    ks = check_levels(ks)
    logger = Logger()
    limit = concave_transform(f, levels).lp_norm(p)

    def row(k: int) -> tuple:
        ban = ban_norm(m, k)
        value = float(dp_distance(ban, ray_norm(ban, f, 1.0, k), p)) / k
        logger.log_info(f"Ray speed: k={k!r} d_p/k={value!r}")
        return k, value, limit, abs(value - limit)

    return ExperimentTable.from_rows(COLUMNS, per_level(row, ks, threads), p=p)
