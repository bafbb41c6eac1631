# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Two-factor tensors and symmetric polynomials
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from cli.errors import DimensionMismatchError, ValidationError


@dataclass(frozen=True, eq=False)
class Tensor2:
    """
    f ∈ V₁ ⊗ V₂ stored as its v₁×v₂ coefficient matrix.
    """
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float)
        if coefficients.ndim != 2 or 0 in coefficients.shape:
            raise ValidationError(f"tensor coefficients must be a non-empty matrix, got shape {coefficients.shape!r}")
        if not np.all(np.isfinite(coefficients)):
            raise ValidationError("tensor coefficients must be finite")
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def outer(cls, x, y) -> 'Tensor2':
        return cls(np.outer(x, y))

    @property
    def dims(self) -> tuple[int, int]:
        return self.coefficients.shape

    def __mul__(self, scalar: float) -> 'Tensor2':
        return Tensor2(self.coefficients * scalar)

    __rmul__ = __mul__

    def __add__(self, other: 'Tensor2') -> 'Tensor2':
        if self.dims != other.dims:
            raise DimensionMismatchError(self.dims[0] * self.dims[1], other.dims[0] * other.dims[1])
        return Tensor2(self.coefficients + other.coefficients)


@dataclass(frozen=True, eq=False)
class SymPoly:
    """
    Homogeneous polynomial Σ_t c_t·z^{e_t} of degree k in v variables.

    Each row of exponents is a multiset of size k written as a multiplicity vector.
    """
    exponents: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        exponents = np.array(self.exponents, dtype=np.int64)
        coefficients = np.array(self.coefficients, dtype=float).reshape(-1)
        if exponents.ndim != 2 or exponents.shape[0] == 0 or exponents.shape[1] == 0:
            raise ValidationError("exponents must be a non-empty matrix, one row per monomial")
        if exponents.shape[0] != coefficients.size:
            raise DimensionMismatchError(exponents.shape[0], coefficients.size, "coefficient count")
        if np.any(exponents < 0):
            raise ValidationError("exponents must be non-negative")
        degrees = exponents.sum(axis=1)
        if np.any(degrees != degrees[0]) or degrees[0] == 0:
            raise ValidationError("every monomial must have the same positive degree")
        if not np.all(np.isfinite(coefficients)):
            raise ValidationError("coefficients must be finite")
        exponents.setflags(write=False)
        coefficients.setflags(write=False)
        object.__setattr__(self, 'exponents', exponents)
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def monomial(cls, exponent, coefficient: float = 1.0) -> 'SymPoly':
        return cls([exponent], [coefficient])

    @classmethod
    def from_symmetric(cls, matrix) -> 'SymPoly':
        """
        The quadratic form zᵀ·S·z.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError("a quadratic form needs a square matrix")
        if not np.allclose(matrix, matrix.T):
            raise ValidationError("matrix must be symmetric")
        v = matrix.shape[0]
        exponents, coefficients = [], []
        for i in range(v):
            for j in range(i, v):
                exponent = np.zeros(v, dtype=np.int64)
                exponent[i] += 1
                exponent[j] += 1
                exponents.append(exponent)
                coefficients.append(matrix[i, j] if i == j else 2 * matrix[i, j])
        return cls(exponents, coefficients)

    @property
    def degree(self) -> int:
        return int(self.exponents[0].sum())

    @property
    def dim(self) -> int:
        return self.exponents.shape[1]

    def evaluate(self, z) -> np.ndarray:
        """
        P on the last axis of z.
        """
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.dim:
            raise DimensionMismatchError(self.dim, z.shape[-1])
        monomials = np.prod(z[..., None, :] ** self.exponents, axis=-1)
        return monomials @ self.coefficients

    __call__ = evaluate

    def gradient(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        gradient = np.empty(z.shape)
        for i in range(self.dim):
            lowered = self.exponents.copy()
            lowered[:, i] = np.maximum(lowered[:, i] - 1, 0)
            monomials = np.prod(z[..., None, :] ** lowered, axis=-1)
            gradient[..., i] = monomials @ (self.coefficients * self.exponents[:, i])
        return gradient

    @cached_property
    def symmetric_matrix(self) -> np.ndarray:
        """
        S with P(z) = zᵀ·S·z. Degree 2 only.
        """
        if self.degree != 2:
            raise ValidationError(f"symmetric matrix requires degree 2, got {self.degree}")
        matrix = np.zeros((self.dim, self.dim))
        for exponent, coefficient in zip(self.exponents, self.coefficients):
            support = np.flatnonzero(exponent)
            if support.size == 1:
                matrix[support[0], support[0]] += coefficient
            else:
                i, j = support
                matrix[i, j] += coefficient / 2
                matrix[j, i] += coefficient / 2
        return matrix

    def to_tensor2(self) -> Tensor2:
        return Tensor2(self.symmetric_matrix)
