# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Test helpers
"""

import numpy as np


def fubini_study_1d(x: np.ndarray) -> np.ndarray:
    """
    ½·log(1 + e^{2x}) on the last axis.
    """
    return 0.5 * np.logaddexp(0.0, 2 * x[..., 0])


def fubini_study_symplectic_1d(xi: np.ndarray) -> np.ndarray:
    """
    ½·(ξ·log ξ + (1-ξ)·log(1-ξ)), with 0·log 0 = 0.
    """
    xi = np.asarray(xi, dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        left = np.where(xi > 0, xi * np.log(np.where(xi > 0, xi, 1.0)), 0.0)
        right = np.where(xi < 1, (1 - xi) * np.log(np.where(xi < 1, 1 - xi, 1.0)), 0.0)
    return 0.5 * (left + right)


def random_gram(rng: np.random.Generator, dim: int, spread: float = 1.0) -> np.ndarray:
    """
    Random symmetric positive-definite matrix with log-eigenvalues in [-spread, spread].
    """
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    eigenvalues = np.exp(rng.uniform(-spread, spread, dim))
    gram = (q * eigenvalues) @ q.T
    return (gram + gram.T) / 2


def random_increment(rng: np.random.Generator, dim: int) -> np.ndarray:
    """
    Random positive semi-definite matrix of random rank.
    """
    rank = int(rng.integers(1, dim + 1))
    factor = rng.standard_normal((dim, rank))
    return factor @ factor.T
