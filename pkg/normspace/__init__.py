# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Finite-dimensional norm geometry
"""

from normspace.norms import (
    DiagonalSupNorm,
    Distance,
    HermitianNorm,
    LogRelativeSpectrum,
    MaxCombination,
    Norm,
    NormHandle,
    PulledBackNorm,
)
from normspace.operations import (
    congruent,
    geodesic,
    john_ellipsoid,
    log_volume_ratio,
    max_norm,
    restrict,
    rooftop,
    unit_ball_log_volume,
)
from normspace.spectrum import (
    dp_distance,
    hermitian_model,
    log_relative_spectrum,
    sampled_log_relative_spectrum,
    transfer_map,
)

__all__ = [
    'DiagonalSupNorm',
    'Distance',
    'HermitianNorm',
    'LogRelativeSpectrum',
    'MaxCombination',
    'Norm',
    'NormHandle',
    'PulledBackNorm',
    'congruent',
    'dp_distance',
    'geodesic',
    'hermitian_model',
    'john_ellipsoid',
    'log_relative_spectrum',
    'log_volume_ratio',
    'max_norm',
    'restrict',
    'rooftop',
    'sampled_log_relative_spectrum',
    'transfer_map',
    'unit_ball_log_volume',
]
