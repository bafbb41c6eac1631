# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Quantization of toric metrics: section norms per level and their asymptotics
"""

from quantize.experiments import (
    RateFit,
    bernstein_markov_experiment,
    char_experiment,
    envelope_experiment,
    envelope_model,
    fit_rate,
    fs_limit,
    geodesic_quantization_experiment,
    geodesic_table,
    isometry_experiment,
    rooftop_experiment,
    rooftop_model,
)
from quantize.model import ToricBundleModel
from quantize.norms import (
    QuantumNorms,
    ban_norm,
    bernstein_markov_gap,
    check_submultiplicative,
    fs_potential,
    hilb_entry,
    hilb_norm,
    monge_ampere_density,
    quantum_norms,
    submultiplicativity_witness,
    uniform_density,
)

__all__ = [
    'QuantumNorms',
    'RateFit',
    'ToricBundleModel',
    'ban_norm',
    'bernstein_markov_experiment',
    'bernstein_markov_gap',
    'char_experiment',
    'check_submultiplicative',
    'envelope_experiment',
    'envelope_model',
    'fit_rate',
    'fs_limit',
    'fs_potential',
    'geodesic_quantization_experiment',
    'geodesic_table',
    'hilb_entry',
    'hilb_norm',
    'isometry_experiment',
    'monge_ampere_density',
    'quantum_norms',
    'rooftop_experiment',
    'rooftop_model',
    'submultiplicativity_witness',
    'uniform_density',
]
