# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Jumping numbers of a filtration per level, and their normalized measures
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from cli.errors import ValidationError
from cli.logger import Logger
from filtration.filtrations import FiltrationSpec
from normspace.norms import DiagonalSupNorm, Label
from quantize.norms import linear_growth_constant, submultiplicativity_witness
from toric.measures import Measure1D


@dataclass(frozen=True, eq=False)
class JumpingData:
    """
    Jumping numbers e_{k,1} ≥ … ≥ e_{k,n_k} of level k, with the monomial each one belongs to.
    """
    k: int
    values: np.ndarray
    labels: tuple[Label, ...]

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != len(self.labels):
            raise ValidationError("one label per jumping number required")
        if np.any(np.diff(values) > 0):
            raise ValidationError("jumping numbers must be sorted non-increasingly")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return self.values.size

    @property
    def normalized(self) -> np.ndarray:
        return self.values / self.k

    def __repr__(self):
        return f"JumpingData(k={self.k}, n={len(self)})"


def jumping_data(f: FiltrationSpec, k: int) -> JumpingData:
    labels = f.labels(k)
    jumps = f.jumps(k)
    # stable, so equal jumps keep the lexicographic order of their monomials
    order = np.argsort(-jumps, kind='stable')
    return JumpingData(k, jumps[order], tuple(labels[i] for i in order))


def jumping_measure(f: FiltrationSpec, k: int) -> Measure1D:
    """
    (1/n_k)·Σ δ_{e_{k,i}/k}
    """
    data = jumping_data(f, k)
    return Measure1D.from_atoms(data.normalized, np.full(len(data), 1.0 / len(data)))


def as_weights(f: FiltrationSpec, k: int) -> DiagonalSupNorm:
    """
    The sup norm whose basis vector z^α has norm e^{-e_k(α)}.
    """
    return DiagonalSupNorm(f.labels(k), -f.jumps(k))


def default_pairs(f: FiltrationSpec, kmax: int = 8) -> list[tuple[int, int]]:
    if f.levels is None:
        return [(k, l) for k in range(1, kmax) for l in range(1, k + 1) if k + l <= kmax]
    present = set(f.levels)
    return [(k, l) for k in f.levels for l in f.levels if l <= k and k + l in present]


def superadditivity_witness(f: FiltrationSpec, pairs: Optional[Iterable[tuple[int, int]]] = None
                            ) -> Optional[tuple[int, int, Label, Label]]:
    """
    First (k, l, α, β) with e_{k+l}(α+β) < e_k(α) + e_l(β), or None.
    """
    pairs = default_pairs(f) if pairs is None else pairs
    return submultiplicativity_witness(lambda k: as_weights(f, k), pairs)


def is_submultiplicative(f: FiltrationSpec, pairs: Optional[Iterable[tuple[int, int]]] = None) -> bool:
    """
    F^s_k·F^t_l ⊂ F^{s+t}_{k+l} on the given pairs of levels, which for monomial filtrations reads
    e_{k+l}(α+β) ≥ e_k(α) + e_l(β).
    """
    witness = superadditivity_witness(f, pairs)
    if witness is not None:
        Logger().log_debug(f"Filtration is not submultiplicative at (k, l, α, β) = {witness!r}")
    return witness is None


def boundedness_constant(f: FiltrationSpec, ks: Iterable[int]) -> float:
    """
    C with |e_k| ≤ C·k on the given levels.
    """
    return linear_growth_constant({k: float(np.max(np.abs(f.jumps(k)))) for k in ks})
