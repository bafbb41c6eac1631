# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Transfer maps, logarithmic relative spectra and d_p distances

Orientation: λ_j(N₀, N₁) is the j-th largest min-max value of log(‖w‖₁/‖w‖₀).
For Hermitian norms this is ½·log of the generalized eigenvalues of (gram₁, gram₀),
i.e. ½·log of the spectrum of the transfer map A = gram₀⁻¹·gram₁.
"""

import math
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.special

from cli.errors import IllConditionedError, ValidationError
from cli.logger import Logger
from constants.numeric import CONDITION_LIMIT, LOG2
from normspace.norms import (
    DiagonalSupNorm,
    Distance,
    HermitianNorm,
    LogRelativeSpectrum,
    MaxCombination,
    Norm,
    PulledBackNorm,
    check_exponent,
    check_same_dim,
)


def _check_conditioning(norm: HermitianNorm) -> None:
    eigenvalues = scipy.linalg.eigvalsh(norm.gram)
    condition = eigenvalues[-1] / eigenvalues[0]
    if condition > CONDITION_LIMIT:
        raise IllConditionedError(f"gram condition number {condition:.3e} exceeds {CONDITION_LIMIT:.0e}")


def whitened_pencil(n0: HermitianNorm, n1: HermitianNorm) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Solves gram₁·v = a·gram₀·v through Cholesky whitening of gram₀.

    :return: (L₀, eigenvalues a ascending, eigenvectors V of L₀⁻¹·gram₁·L₀⁻ᵀ)
    """
    check_same_dim(n0, n1)
    _check_conditioning(n0)
    _check_conditioning(n1)
    lower = n0.cholesky
    half = scipy.linalg.solve_triangular(lower, n1.gram, lower=True)
    whitened = scipy.linalg.solve_triangular(lower, half.T, lower=True)
    whitened = (whitened + whitened.T) / 2
    eigenvalues, eigenvectors = scipy.linalg.eigh(whitened)
    if eigenvalues[0] <= 0:
        raise IllConditionedError("pencil has a non-positive generalized eigenvalue")
    return lower, eigenvalues, eigenvectors


def both_diagonal(n0: HermitianNorm, n1: HermitianNorm) -> bool:
    return n0.is_diagonal and n1.is_diagonal


def transfer_map(n0: HermitianNorm, n1: HermitianNorm) -> np.ndarray:
    """
    A with ⟨x, A·y⟩₀ = ⟨x, y⟩₁, i.e. gram₀·A = gram₁.
    """
    check_same_dim(n0, n1)
    if both_diagonal(n0, n1):
        return np.diag(np.exp(2 * (n1.log_diagonal - n0.log_diagonal)))
    lower, eigenvalues, eigenvectors = whitened_pencil(n0, n1)
    # A = L₀⁻ᵀ·V·diag(a)·Vᵀ·L₀ᵀ
    left = scipy.linalg.solve_triangular(lower, eigenvectors, lower=True, trans='T')
    return (left * eigenvalues) @ (eigenvectors.T @ lower.T)


def same_basis(n0: HermitianNorm, n1: HermitianNorm) -> HermitianNorm:
    """
    n1 reordered to the labels of n0. Unlabelled norms are paired by position.
    """
    if n0.labels is None or n1.labels is None or n0.labels == n1.labels:
        return n1
    if set(n0.labels) != set(n1.labels):
        raise ValidationError("unsupported pair: Hermitian norms with different labels")
    return n1.relabelled(n0.labels)


def hermitian_spectrum(n0: HermitianNorm, n1: HermitianNorm) -> np.ndarray:
    check_same_dim(n0, n1)
    n1 = same_basis(n0, n1)
    if both_diagonal(n0, n1):
        return np.sort(n1.log_diagonal - n0.log_diagonal)[::-1]
    _, eigenvalues, _ = whitened_pencil(n0, n1)
    return np.sort(0.5 * np.log(eigenvalues))[::-1]


def diagonal_spectrum(n0: DiagonalSupNorm, n1: DiagonalSupNorm) -> np.ndarray:
    """
    Sorted differences of log-weights. Exact in every dimension: the supremum over j-dimensional
    subspaces is attained on coordinate subspaces of the j largest ratios.
    """
    if set(n0.labels) != set(n1.labels):
        raise ValidationError("unsupported pair: diagonal sup norms with different labels")
    differences = n1.aligned(n0.labels) - n0.log_weights
    return np.sort(differences)[::-1]


def hermitian_model(norm: Norm) -> tuple[HermitianNorm, float]:
    """
    A Hermitian norm H and C ≥ 0 with e^{-C}·H ≤ norm ≤ e^{C}·H.

    - Hermitian: itself, C = 0
    - diagonal sup: John ellipsoid centred geometrically, C = ¼·log v
    - max combination: rooftop of the operand models centred by 2^{-1/4}, C = max(C_i) + ¼·log 2
    - pulled back: restriction of the base model, same C
    """
    # Imported here, operations builds on this module
    from normspace.operations import restrict, rooftop

    if isinstance(norm, HermitianNorm):
        return norm, 0.0
    if isinstance(norm, DiagonalSupNorm):
        quarter = 0.25 * math.log(norm.dim)
        return HermitianNorm.from_log_diagonal(norm.log_weights - quarter, norm.labels), quarter
    if isinstance(norm, MaxCombination):
        first, c_first = hermitian_model(norm.first)
        second, c_second = hermitian_model(norm.second)
        return rooftop(first, second).scaled(-0.25 * LOG2), max(c_first, c_second) + 0.25 * LOG2
    if isinstance(norm, PulledBackNorm):
        base, constant = hermitian_model(norm.base)
        return restrict(base, norm.basis.T), constant
    raise ValidationError(f"unsupported norm {type(norm).__name__}")


def log_relative_spectrum(n0: Norm, n1: Norm) -> LogRelativeSpectrum:
    """
    λ_1 ≥ … ≥ λ_v for a pair of norms on the same space.

    Exact for Hermitian pairs and for diagonal sup pairs with common labels. Other pairs go through
    Hermitian models and carry the sum of both model constants as uncertainty.
    """
    check_same_dim(n0, n1)
    if isinstance(n0, HermitianNorm) and isinstance(n1, HermitianNorm):
        return LogRelativeSpectrum(hermitian_spectrum(n0, n1))
    if isinstance(n0, DiagonalSupNorm) and isinstance(n1, DiagonalSupNorm):
        return LogRelativeSpectrum(diagonal_spectrum(n0, n1))
    h0, c0 = hermitian_model(n0)
    h1, c1 = hermitian_model(n1)
    logger = Logger()
    logger.log_warning(f"Mixed pair {n0!r}, {n1!r} through Hermitian models, uncertainty {c0 + c1:.6g}")
    return LogRelativeSpectrum(hermitian_spectrum(h0, h1), uncertainty=c0 + c1)


def _diagonal_extremes(hermitian: HermitianNorm, sup: DiagonalSupNorm) -> Optional[tuple[float, float]]:
    """
    Exact (λ_1, λ_v) of log(‖w‖_sup/‖w‖_H) for a diagonal Hermitian norm against a diagonal sup norm
    on the same labels, or None when they do not share labels.
    """
    if not hermitian.is_diagonal or hermitian.labels is None or set(hermitian.labels) != set(sup.labels):
        return None
    a = sup.aligned(hermitian.labels)
    b = hermitian.log_diagonal
    top = float(np.max(a - b))
    bottom = float(-0.5 * scipy.special.logsumexp(2 * (b - a)))
    return top, bottom


def dp_distance(n0: Norm, n1: Norm, p: float) -> Distance:
    """
    d_p(N₀, N₁) = (Σ|λ_j|^p / v)^{1/p}, p = ∞ for the max.

    For a Hermitian pair this is ½·(Tr|log A|^p / v)^{1/p} with A the transfer map.
    """
    check_exponent(p)
    check_same_dim(n0, n1)
    if np.isinf(p):
        extremes = None
        if isinstance(n0, HermitianNorm) and isinstance(n1, DiagonalSupNorm):
            extremes = _diagonal_extremes(n0, n1)
        elif isinstance(n0, DiagonalSupNorm) and isinstance(n1, HermitianNorm):
            extremes = _diagonal_extremes(n1, n0)
            if extremes is not None:
                extremes = (-extremes[1], -extremes[0])
        if extremes is not None:
            return Distance(max(abs(extremes[0]), abs(extremes[1])))
    return log_relative_spectrum(n0, n1).dp(p)


def sampled_log_relative_spectrum(n0: Norm, n1: Norm, rng: np.random.Generator,
                                  subspaces: int = 2000, vectors: int = 200) -> np.ndarray:
    """
    Brute-force estimate of the min-max definition for any pair of evaluable norms.

    For each j, sup over random j-dimensional subspaces of the inf over random vectors inside them.
    Lower-biased in the sup and upper-biased in the inf; intended for dimensions ≤ 3.
    """
    check_same_dim(n0, n1)
    dim = n0.dim
    values = np.empty(dim)
    for j in range(1, dim):
        best = -np.inf
        for _ in range(subspaces):
            basis = rng.standard_normal((dim, j))
            samples = rng.standard_normal((vectors if j > 1 else 1, j)) @ basis.T
            best = max(best, float(np.min(np.log(n1(samples)) - np.log(n0(samples)))))
        values[j - 1] = best
    # j = v: the whole space, sampled densely
    samples = rng.standard_normal((subspaces * vectors, dim))
    values[dim - 1] = float(np.min(np.log(n1(samples)) - np.log(n0(samples))))
    return values
