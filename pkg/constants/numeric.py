# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Numerical tolerances and defaults shared by the computational packages
"""

import math

###
# LINEAR ALGEBRA
###

SYMMETRY_RTOL = 1e-12  # relative asymmetry tolerated in a gram matrix
CONDITION_LIMIT = 1e12  # dense pencils above this condition number are rejected
EIGEN_RESIDUAL = 1e-12

###
# TENSOR NORMS
###

SYM_EV_RESTARTS = 32
SYM_EV_STEP = 1e-2
SYM_EV_GTOL = 1e-8
SYM_EV_MAXITER = 10_000
SYM_EV_SAMPLES = 4096  # Monte-Carlo certificate

###
# TORIC GRIDS
###

DEFAULT_BOX = (-8.0, 8.0)
DEFAULT_GRID_1D = 2049  # 2048 cells
DEFAULT_GRID_2D = 257  # 256² cells
SLOPE_MARGIN = 0.10  # padding of the slope range in 2-D envelopes
ENVELOPE_SLOPES = 257  # slope nodes per axis of 2-D concave transforms
MAX_BOX_DOUBLINGS = 3  # box enlargements tried for slope coverage
INTERIOR_MARGIN = 0.05  # band along ∂P excluded from uniform checks
CONVEXITY_RTOL = 1e-9
SUPERSAMPLING = 8  # per axis, for boundary cells of 2-D quadrature
ATOM_FACTOR = 10.0  # slope jump vs local median to be called an atom
ATOM_WINDOW = 9

###
# FILTRATIONS AND SUMSETS
###

FEKETE_LEVELS = 10  # limits along k = 2**j, j ≤ FEKETE_LEVELS
FEKETE_TOL = 1e-6
SUMSET_LIMIT = 10_000_000

###
# MISC
###

LOG2 = math.log(2.0)
