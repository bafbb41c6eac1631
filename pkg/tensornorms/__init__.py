# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Tensor norms of two Hermitian factors and norms on symmetric powers
"""

from tensornorms.norms import (
    SymEvResult,
    SymmetricNorms,
    injective_norm2,
    projective_norm2,
    quotient_norm,
    sym_chain_norms,
    sym_ev_norm,
)
from tensornorms.tensors import SymPoly, Tensor2

__all__ = [
    'SymEvResult',
    'SymPoly',
    'SymmetricNorms',
    'Tensor2',
    'injective_norm2',
    'projective_norm2',
    'quotient_norm',
    'sym_chain_norms',
    'sym_ev_norm',
]
