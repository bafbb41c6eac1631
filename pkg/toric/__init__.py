# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Toric dictionary: polytopes, convex potentials on grids, Legendre transforms and measures
"""

from toric.grid import ConvexGridFunction, Grid, GridFunction, convexity_violation
from toric.legendre import convex_envelope, discrete_legendre, legendre_at, slope_coverage_box
from toric.mabuchi import (
    energy_difference,
    mabuchi_dp,
    mabuchi_oracle_1d,
    potential_geodesic,
    symplectic_geodesic,
)
from toric.measures import Measure1D, ma_measure_1d, pushforward
from toric.polytope import LatticePolytope, ehrhart_ratio, lattice_points, line_bundle_volume

__all__ = [
    'ConvexGridFunction',
    'Grid',
    'GridFunction',
    'LatticePolytope',
    'Measure1D',
    'convex_envelope',
    'convexity_violation',
    'discrete_legendre',
    'ehrhart_ratio',
    'energy_difference',
    'lattice_points',
    'legendre_at',
    'line_bundle_volume',
    'ma_measure_1d',
    'mabuchi_dp',
    'mabuchi_oracle_1d',
    'potential_geodesic',
    'pushforward',
    'slope_coverage_box',
    'symplectic_geodesic',
]
