# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Rays of norms t ↦ N_t, t ≥ 0, issued from a norm and a filtration
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from cli.errors import DimensionMismatchError, ValidationError
from filtration.filtrations import FiltrationSpec
from filtration.jumps import jumping_data
from normspace.norms import DiagonalSupNorm, HermitianNorm, as_labels, check_exponent


@dataclass(frozen=True, eq=False)
class AdaptedFlag:
    """
    A basis b_1, …, b_v (columns) with jumps e_1 ≥ … ≥ e_v: F^t is spanned by the b_i with e_i ≥ t.
    """
    basis: np.ndarray
    jumps: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        jumps = np.array(self.jumps, dtype=float).reshape(-1)
        if basis.ndim != 2 or basis.shape != (jumps.size, jumps.size):
            raise ValidationError(f"inconsistent flag: basis of shape {basis.shape!r} for {jumps.size} jumps")
        if np.any(np.diff(jumps) > 0) or not np.all(np.isfinite(jumps)):
            raise ValidationError("inconsistent flag: jumps must be finite and non-increasing")
        if np.linalg.matrix_rank(basis) < jumps.size:
            raise ValidationError("inconsistent flag: basis is not invertible")
        basis.setflags(write=False)
        jumps.setflags(write=False)
        object.__setattr__(self, 'basis', basis)
        object.__setattr__(self, 'jumps', jumps)

    @property
    def dim(self) -> int:
        return self.jumps.size

    def coordinate_jumps(self) -> np.ndarray | None:
        """
        Jump of each coordinate vector when the basis is a scaled permutation of it, else None.
        """
        nonzero = self.basis != 0
        if not (np.all(nonzero.sum(axis=0) == 1) and np.all(nonzero.sum(axis=1) == 1)):
            return None
        coordinate = np.argmax(nonzero, axis=0)
        jumps = np.empty(self.dim)
        jumps[coordinate] = self.jumps
        return jumps


def monomial_flag(f: FiltrationSpec, k: int, labels) -> AdaptedFlag:
    """
    The monomials ordered by decreasing jump, in the coordinates of the given labels.
    """
    labels = as_labels(labels)
    data = jumping_data(f, k)
    if set(labels) != set(data.labels):
        raise ValidationError(f"misaligned labels: the norm is not indexed by the lattice points of {k}P")
    index = {label: i for i, label in enumerate(labels)}
    basis = np.zeros((len(labels), len(labels)))
    for column, label in enumerate(data.labels):
        basis[index[label], column] = 1.0
    return AdaptedFlag(basis, data.values)


def _check_time(t: float) -> None:
    if not t >= 0:
        raise ValidationError(f"t ≥ 0 required, got {t!r}")


def ray_hermitian(h0: HermitianNorm, flag: AdaptedFlag, t: float) -> HermitianNorm:
    """
    The Hermitian ray: if u_i is the h₀-orthonormal basis adapted to the flag (Gram–Schmidt of the b_i),
    the vectors e^{t·e_i}·u_i are orthonormal for h_t.

    With BᵀGB = LLᵀ, gram_t = B^{-T}·L·diag(e^{-2t·e})·Lᵀ·B^{-1}.
    """
    _check_time(t)
    if flag.dim != h0.dim:
        raise DimensionMismatchError(h0.dim, flag.dim, "flag dimension")
    if h0.is_diagonal:
        jumps = flag.coordinate_jumps()
        if jumps is not None:
            return HermitianNorm.from_log_diagonal(h0.log_diagonal - t * jumps, h0.labels)
    basis = flag.basis
    lower = scipy.linalg.cholesky(basis.T @ h0.gram @ basis, lower=True)
    # B^{-T}·L, so that gram_t = M·diag·Mᵀ
    factor = scipy.linalg.solve(basis.T, lower)
    gram = (factor * np.exp(-2 * t * flag.jumps)) @ factor.T
    return HermitianNorm((gram + gram.T) / 2, h0.labels)


def ray_speed(flag: AdaptedFlag, p: float) -> float:
    """
    d_p(H_s, H_t)/|t - s| = (Σ|e_i|^p / v)^{1/p}: the Hermitian ray is a geodesic.
    """
    check_exponent(p)
    jumps = np.abs(flag.jumps)
    if np.isinf(p):
        return float(jumps.max())
    return float(np.mean(jumps ** p) ** (1 / p))


def ray_norm(n0: DiagonalSupNorm, f: FiltrationSpec, t: float, k: int) -> DiagonalSupNorm:
    """
    N_t(s) = inf Σ e^{-t·μ_i}·N₀(s_i) over decompositions s = Σ s_i with s_i ∈ F^{μ_i}.

    For a diagonal norm and a monomial filtration the infimum on each monomial is attained by the monomial
    itself, which gives logWeight_t(α) = logWeight₀(α) - t·e_k(α). On other vectors the diagonal norm is
    within a factor v of the infimum, from below.
    """
    _check_time(t)
    expected = f.labels(k)
    if set(n0.labels) != set(expected):
        raise ValidationError(f"misaligned labels: the norm is not indexed by the lattice points of {k}P")
    jumps = f.jumps_at(k, np.array(n0.labels))
    return DiagonalSupNorm(n0.labels, n0.log_weights - t * jumps)
