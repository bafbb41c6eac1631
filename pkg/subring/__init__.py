# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Density of the subring generated by the sections of one level
"""

from subring.sumsets import (
    SumsetState,
    component_dim,
    density_report,
    full_dim,
    is_saturated,
    semigroup_holds,
    sumset,
    tail_start,
    threshold,
    translates_into_next,
)

__all__ = [
    'SumsetState',
    'component_dim',
    'density_report',
    'full_dim',
    'is_saturated',
    'semigroup_holds',
    'sumset',
    'tail_start',
    'threshold',
    'translates_into_next',
]
