# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Filtrations of the section spaces: jumping numbers, rays of norms and spectral measures
"""

from filtration.filtrations import FiltrationSpec
from filtration.jumps import (
    JumpingData,
    as_weights,
    boundedness_constant,
    is_submultiplicative,
    jumping_data,
    jumping_measure,
    superadditivity_witness,
)
from filtration.rays import AdaptedFlag, monomial_flag, ray_hermitian, ray_norm, ray_speed
from filtration.spectral import (
    ConcaveTransform,
    concave_transform,
    filtration_spectrum_experiment,
    ray_speed_experiment,
    spectral_measure,
)

__all__ = [
    'AdaptedFlag',
    'ConcaveTransform',
    'FiltrationSpec',
    'JumpingData',
    'as_weights',
    'boundedness_constant',
    'concave_transform',
    'filtration_spectrum_experiment',
    'is_submultiplicative',
    'jumping_data',
    'jumping_measure',
    'monomial_flag',
    'ray_hermitian',
    'ray_norm',
    'ray_speed',
    'ray_speed_experiment',
    'spectral_measure',
    'superadditivity_witness',
]
