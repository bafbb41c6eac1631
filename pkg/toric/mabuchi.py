# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Mabuchi geometry of torus-invariant metrics

On the symplectic side geodesics are affine, g_t = (1-t)·g₀ + t·g₁, so
d_p(h₀, h₁)^p = (1/vol P)·∫_P |g₁ - g₀|^p dξ and E(h₁) - E(h₀) = (1/vol P)·∫_P (g₁ - g₀) dξ.
"""

import numpy as np

from cli.errors import ValidationError
from cli.logger import Logger
from normspace.norms import check_exponent
from toric.grid import ConvexGridFunction, Grid, GridFunction
from toric.legendre import discrete_legendre, legendre_at
from toric.measures import ma_measure_1d
from toric.polytope import LatticePolytope

ORACLE_STEP = 1e-4


def mabuchi_dp(g0: GridFunction, g1: GridFunction, p: float) -> float:
    check_exponent(p)
    g0.grid.check_compatible(g1.grid)
    difference = np.abs((g1 - g0).masked_values)
    if np.isinf(p):
        return float(np.max(difference))
    weights = g0.grid.weights[g0.grid.mask]
    return float(np.sum(weights * difference ** p) ** (1.0 / p))


def energy_difference(g0: GridFunction, g1: GridFunction) -> float:
    """
    E(h₁) - E(h₀), the mean of g₁ - g₀ over P.
    """
    g0.grid.check_compatible(g1.grid)
    return (g1 - g0).mean()


def symplectic_geodesic(g0: GridFunction, g1: GridFunction, t: float) -> ConvexGridFunction:
    if not 0 <= t <= 1:
        raise ValidationError(f"t must lie in [0, 1], got {t!r}")
    g0.grid.check_compatible(g1.grid)
    mixed = g0 * (1 - t) + g1 * t
    return ConvexGridFunction(mixed.grid, mixed.values)


def potential_geodesic(g0: GridFunction, g1: GridFunction, t: float, box: Grid) -> ConvexGridFunction:
    """
    u_t on the box: the Legendre transform of the symplectic geodesic.
    """
    g_t = symplectic_geodesic(g0, g1, t)
    values = legendre_at(g_t, box.nodes).reshape(box.shape)
    return ConvexGridFunction(box, values)


def mabuchi_oracle_1d(phi0: GridFunction, phi1: GridFunction, p: LatticePolytope, exponent: float) -> float:
    """
    d_p from the potential side in dimension 1: (∫ |u̇₀|^p MA(u₀) / ∫ MA(u₀))^{1/p}.

    u̇₀ is a forward difference of the weak geodesic built by interpolating on the Legendre side and
    transforming back. Independent of mabuchi_dp except for the shared conjugates.
    """
    check_exponent(exponent)
    if phi0.dim != 1 or p.dim != 1:
        raise ValidationError("the potential-side oracle is one-dimensional")
    phi0.grid.check_compatible(phi1.grid)
    logger = Logger()
    box = phi0.grid
    target = Grid.over_polytope(p, box.shape[0])
    g0, g1 = discrete_legendre(phi0, target), discrete_legendre(phi1, target)
    u0 = potential_geodesic(g0, g1, 0.0, box)
    speed = (potential_geodesic(g0, g1, ORACLE_STEP, box).values - u0.values) / ORACLE_STEP

    measure = ma_measure_1d(u0)
    x = box.axes[0]
    magnitude = np.abs(speed)
    if np.isinf(exponent):
        return float(np.max(magnitude))
    integrand = magnitude ** exponent
    atoms = np.sum(measure.atom_masses * np.interp(measure.atom_locations, x, integrand))
    density = np.sum(measure.bin_masses * integrand[1:-1])
    logger.log_debug(f"Oracle: Monge–Ampère mass {measure.total!r} on {box!r}")
    return float(((atoms + density) / measure.total) ** (1.0 / exponent))
