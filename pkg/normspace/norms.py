# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Norms on finite-dimensional real coefficient spaces
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from cli.errors import DimensionMismatchError, ValidationError
from constants.numeric import SYMMETRY_RTOL

Label = tuple[int, ...]


def as_labels(labels: Optional[Sequence[Sequence[int]]]) -> Optional[tuple[Label, ...]]:
    if labels is None:
        return None
    return tuple(tuple(int(c) for c in np.atleast_1d(label)) for label in labels)


class Norm(ABC):
    """
    Abstract Base Class for norms, evaluated on the last axis of an array.
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        ...

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> np.ndarray:
        ...

    def __call__(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionMismatchError(self.dim, x.shape[-1])
        value = self.evaluate(x)
        return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True, eq=False)
class HermitianNorm(Norm):
    """
    ‖x‖² = xᵀ·gram·x

    A diagonal norm also keeps its log-diagonal (log of the norms of the basis vectors), which every
    operation uses instead of the gram when both operands are diagonal. Large levels of quantization
    overflow the gram long before the log-weights.
    """
    gram: np.ndarray
    labels: Optional[tuple[Label, ...]] = None
    log_diagonal: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.log_diagonal is not None:
            log_diagonal = np.asarray(self.log_diagonal, dtype=float).copy()
            if log_diagonal.ndim != 1 or not np.all(np.isfinite(log_diagonal)):
                raise ValidationError("log-diagonal must be a finite vector")
            log_diagonal.setflags(write=False)
            object.__setattr__(self, 'log_diagonal', log_diagonal)
        gram = np.array(self.gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] == 0:
            raise ValidationError(f"gram must be a non-empty square matrix, got shape {gram.shape!r}")
        if self.log_diagonal is None:
            if not np.all(np.isfinite(gram)):
                raise ValidationError("gram entries must be finite")
            scale = np.max(np.abs(gram))
            if np.max(np.abs(gram - gram.T)) > SYMMETRY_RTOL * scale:
                raise ValidationError("gram must be symmetric")
            gram = (gram + gram.T) / 2
            try:
                scipy.linalg.cholesky(gram, lower=True)
            except np.linalg.LinAlgError:
                raise ValidationError("gram must be positive-definite") from None
        gram.setflags(write=False)
        object.__setattr__(self, 'gram', gram)
        labels = as_labels(self.labels)
        if labels is not None and len(labels) != gram.shape[0]:
            raise DimensionMismatchError(gram.shape[0], len(labels), "label count")
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_log_diagonal(cls, log_diagonal, labels=None) -> 'HermitianNorm':
        log_diagonal = np.asarray(log_diagonal, dtype=float)
        with np.errstate(over='ignore'):
            gram = np.diag(np.exp(2 * log_diagonal))
        return cls(gram=gram, labels=labels, log_diagonal=log_diagonal)

    @classmethod
    def euclidean(cls, dim: int) -> 'HermitianNorm':
        return cls.from_log_diagonal(np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def is_diagonal(self) -> bool:
        return self.log_diagonal is not None

    @cached_property
    def cholesky(self) -> np.ndarray:
        """
        Lower factor L with gram = L·Lᵀ, so that ‖x‖ = |Lᵀx|.
        """
        return scipy.linalg.cholesky(self.gram, lower=True)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        if self.is_diagonal:
            return np.sqrt(np.sum((np.exp(self.log_diagonal) * x) ** 2, axis=-1))
        return np.sqrt(np.maximum(np.einsum('...i,ij,...j->...', x, self.gram, x), 0.0))

    def scaled(self, log_factor: float) -> 'HermitianNorm':
        """
        e^c·N
        """
        if self.is_diagonal:
            return HermitianNorm.from_log_diagonal(self.log_diagonal + log_factor, self.labels)
        return HermitianNorm(self.gram * np.exp(2 * log_factor), self.labels)

    def relabelled(self, labels: Sequence[Label]) -> 'HermitianNorm':
        """
        The same norm with its basis reordered to the given labels.
        """
        index = {label: i for i, label in enumerate(self.labels)}
        order = np.array([index[tuple(label)] for label in labels])
        if self.is_diagonal:
            return HermitianNorm.from_log_diagonal(self.log_diagonal[order], labels)
        return HermitianNorm(self.gram[np.ix_(order, order)], labels)

    def __repr__(self):
        kind = 'diagonal' if self.is_diagonal else 'dense'
        return f"HermitianNorm(dim={self.dim}, {kind})"


@dataclass(frozen=True, eq=False)
class DiagonalSupNorm(Norm):
    """
    ‖x‖ = max_j exp(logWeights_j)·|x_j| on a basis indexed by lattice points.
    """
    labels: tuple[Label, ...]
    log_weights: np.ndarray

    def __post_init__(self):
        labels = as_labels(self.labels)
        log_weights = np.array(self.log_weights, dtype=float).reshape(-1)
        if len(labels) == 0:
            raise ValidationError("a diagonal sup norm needs at least one label")
        if len(labels) != len(log_weights):
            raise DimensionMismatchError(len(labels), len(log_weights), "weight count")
        if len(set(labels)) != len(labels):
            raise ValidationError("labels must be distinct")
        if not np.all(np.isfinite(log_weights)):
            raise ValidationError("log-weights must be finite")
        log_weights.setflags(write=False)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'log_weights', log_weights)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict[Label, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.max(np.exp(self.log_weights) * np.abs(x), axis=-1)

    def scaled(self, log_factor: float) -> 'DiagonalSupNorm':
        return DiagonalSupNorm(self.labels, self.log_weights + log_factor)

    def aligned(self, labels: Sequence[Label]) -> np.ndarray:
        """
        Log-weights reordered to the given labels.
        """
        try:
            return np.array([self.log_weights[self.index[tuple(label)]] for label in labels])
        except KeyError as error:
            raise ValidationError(f"label {error.args[0]!r} is not carried by this norm") from None

    def __repr__(self):
        return f"DiagonalSupNorm(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class MaxCombination(Norm):
    """
    Pointwise max of two norms. Evaluation only.
    """
    first: Norm
    second: Norm

    def __post_init__(self):
        if self.first.dim != self.second.dim:
            raise DimensionMismatchError(self.first.dim, self.second.dim)

    @property
    def dim(self) -> int:
        return self.first.dim

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.maximum(self.first.evaluate(x), self.second.evaluate(x))


@dataclass(frozen=True, eq=False)
class PulledBackNorm(Norm):
    """
    Restriction of a norm to the span of the columns of basis: y ↦ ‖basis·y‖.
    """
    base: Norm
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] != self.base.dim:
            raise DimensionMismatchError(self.base.dim, basis.shape[0], "ambient dimension")
        basis.setflags(write=False)
        object.__setattr__(self, 'basis', basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.base.evaluate(x @ self.basis.T)


NormHandle = HermitianNorm | DiagonalSupNorm | MaxCombination | PulledBackNorm


@dataclass(frozen=True, eq=False)
class LogRelativeSpectrum:
    """
    λ_1 ≥ … ≥ λ_v, the min-max log-ratios ‖w‖₁/‖w‖₀.

    uncertainty bounds |λ_j - exact λ_j| for every j; it is zero unless a surrogate was needed.
    """
    values: np.ndarray
    uncertainty: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size == 0:
            raise ValidationError("a spectrum needs at least one value")
        if np.any(np.diff(values) > 0):
            raise ValidationError("spectrum must be sorted non-increasing")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return self.values.size

    def __getitem__(self, item):
        return self.values[item]

    def dp(self, p: float) -> 'Distance':
        check_exponent(p)
        magnitudes = np.abs(self.values)
        if np.isinf(p):
            value = float(np.max(magnitudes))
        else:
            value = float(np.mean(magnitudes ** p) ** (1.0 / p))
        return Distance(value, self.uncertainty)


class Distance(float):
    """
    A distance value with its certified additive uncertainty.
    """
    uncertainty: float

    def __new__(cls, value: float, uncertainty: float = 0.0):
        instance = super().__new__(cls, value)
        instance.uncertainty = float(uncertainty)
        return instance

    @property
    def exact(self) -> bool:
        return self.uncertainty == 0.0

    def __repr__(self):
        if self.exact:
            return f"Distance({float(self)!r})"
        return f"Distance({float(self)!r} ± {self.uncertainty!r})"


def check_exponent(p: float) -> None:
    if not p >= 1:
        raise ValidationError(f"p ≥ 1 required, got {p!r}")


def check_same_dim(n0: Norm, n1: Norm) -> None:
    if n0.dim != n1.dim:
        raise DimensionMismatchError(n0.dim, n1.dim)
