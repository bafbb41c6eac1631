# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Constructions on norms: geodesics, rooftop and max norms, John ellipsoids, restrictions, volumes
"""

import math

import numpy as np
import scipy.linalg

from cli.errors import ValidationError
from normspace.norms import (
    DiagonalSupNorm,
    HermitianNorm,
    MaxCombination,
    Norm,
    PulledBackNorm,
    check_same_dim,
)
from normspace.spectrum import both_diagonal, same_basis, whitened_pencil


def _spectral_function(n0: HermitianNorm, n1: HermitianNorm, function) -> HermitianNorm:
    """
    gram₀-congruent functional calculus: L₀·V·diag(f(a))·Vᵀ·L₀ᵀ for the whitened pencil.
    """
    lower, eigenvalues, eigenvectors = whitened_pencil(n0, n1)
    left = lower @ eigenvectors
    gram = (left * function(eigenvalues)) @ left.T
    return HermitianNorm((gram + gram.T) / 2, n0.labels)


def geodesic(n0: HermitianNorm, n1: HermitianNorm, t: float) -> HermitianNorm:
    """
    N_t with scalar product ⟨A^t·,·⟩₀.

    The Hermitian specialization of complex interpolation between N₀ and N₁.
    """
    check_same_dim(n0, n1)
    if not 0 <= t <= 1:
        raise ValidationError(f"t must lie in [0, 1], got {t!r}")
    if t == 0:
        return n0
    if t == 1:
        return n1
    n1 = same_basis(n0, n1)
    if both_diagonal(n0, n1):
        return HermitianNorm.from_log_diagonal((1 - t) * n0.log_diagonal + t * n1.log_diagonal, n0.labels)
    return _spectral_function(n0, n1, lambda a: a ** t)


def rooftop(n0: HermitianNorm, n1: HermitianNorm) -> HermitianNorm:
    """
    N₀ ∨ N₁: in a basis orthogonal for both, each basis vector gets the larger of its two norms.
    """
    check_same_dim(n0, n1)
    n1 = same_basis(n0, n1)
    if both_diagonal(n0, n1):
        return HermitianNorm.from_log_diagonal(np.maximum(n0.log_diagonal, n1.log_diagonal), n0.labels)
    return _spectral_function(n0, n1, lambda a: np.maximum(a, 1.0))


def max_norm(n0: Norm, n1: Norm) -> Norm:
    """
    Pointwise max{N₀, N₁}.

    Stays diagonal for diagonal sup norms on common labels, otherwise evaluation only.
    """
    check_same_dim(n0, n1)
    if n0 is n1:
        return n0
    if isinstance(n0, DiagonalSupNorm) and isinstance(n1, DiagonalSupNorm) and set(n0.labels) == set(n1.labels):
        return DiagonalSupNorm(n0.labels, np.maximum(n0.log_weights, n1.aligned(n0.labels)))
    return MaxCombination(n0, n1)


def john_ellipsoid(n: DiagonalSupNorm, inscribed: bool = False) -> HermitianNorm:
    """
    Hermitian norm H comparable to a diagonal sup norm N.

    By default H has the same log-weights and N ≤ H ≤ √v·N.
    With inscribed=True, H is scaled by 1/√v so that H ≤ N ≤ √v·H.
    """
    log_weights = n.log_weights
    if inscribed:
        log_weights = log_weights - 0.5 * math.log(n.dim)
    return HermitianNorm.from_log_diagonal(log_weights, n.labels)


def _coordinate_selection(basis: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """
    (indices, scales) when every column of basis is a multiple of a distinct unit vector.
    """
    nonzero = basis != 0
    if not np.all(nonzero.sum(axis=0) == 1):
        return None
    indices = np.argmax(nonzero, axis=0)
    if len(set(indices.tolist())) != len(indices):
        return None
    return indices, basis[indices, np.arange(basis.shape[1])]


def restrict(n: Norm, basis) -> Norm:
    """
    Restriction of n to E = span(basis), in the coordinates given by the basis vectors.

    :param basis: vectors spanning E, one per row
    """
    vectors = np.atleast_2d(np.asarray(basis, dtype=float))
    if vectors.shape[1] != n.dim:
        raise ValidationError(f"basis vectors must have dimension {n.dim}, got {vectors.shape[1]}")
    matrix = vectors.T
    if vectors.shape[0] > n.dim or np.linalg.matrix_rank(matrix) != vectors.shape[0]:
        raise ValidationError("basis must be linearly independent")
    selection = _coordinate_selection(matrix)
    if isinstance(n, HermitianNorm):
        labels = None
        if selection is not None and n.labels is not None:
            labels = [n.labels[i] for i in selection[0]]
        if n.is_diagonal and selection is not None:
            indices, scales = selection
            return HermitianNorm.from_log_diagonal(n.log_diagonal[indices] + np.log(np.abs(scales)), labels)
        gram = matrix.T @ n.gram @ matrix
        return HermitianNorm((gram + gram.T) / 2, labels)
    if isinstance(n, DiagonalSupNorm) and selection is not None:
        indices, scales = selection
        return DiagonalSupNorm([n.labels[i] for i in indices], n.log_weights[indices] + np.log(np.abs(scales)))
    if isinstance(n, MaxCombination):
        return MaxCombination(restrict(n.first, vectors), restrict(n.second, vectors))
    if isinstance(n, PulledBackNorm):
        return PulledBackNorm(n.base, n.basis @ matrix)
    return PulledBackNorm(n, matrix)


def log_volume_ratio(n0: HermitianNorm, n1: HermitianNorm) -> float:
    """
    log(vol B₀ / vol B₁) = ½·(log det gram₁ - log det gram₀).
    """
    check_same_dim(n0, n1)
    if both_diagonal(n0, n1):
        return float(np.sum(n1.log_diagonal - n0.log_diagonal))
    _, logdet0 = np.linalg.slogdet(n0.gram)
    _, logdet1 = np.linalg.slogdet(n1.gram)
    return 0.5 * float(logdet1 - logdet0)


def unit_ball_log_volume(n: HermitianNorm) -> float:
    """
    log vol{x : ‖x‖ ≤ 1} for Lebesgue measure on the coefficient space.
    """
    v = n.dim
    log_euclidean = 0.5 * v * math.log(math.pi) - math.lgamma(0.5 * v + 1)
    if n.is_diagonal:
        return log_euclidean - float(np.sum(n.log_diagonal))
    _, logdet = np.linalg.slogdet(n.gram)
    return log_euclidean - 0.5 * float(logdet)


def congruent(n: HermitianNorm, change: np.ndarray) -> HermitianNorm:
    """
    The same norm written in new coordinates: gram ↦ Sᵀ·gram·S.
    """
    change = np.asarray(change, dtype=float)
    if change.shape != (n.dim, n.dim) or abs(scipy.linalg.det(change)) == 0:
        raise ValidationError("change of basis must be an invertible square matrix")
    gram = change.T @ n.gram @ change
    return HermitianNorm((gram + gram.T) / 2)
