# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Subring generated by the sections of level m, through sumsets of lattice points

The monomials of level km reached by products of k sections of level m are the points of
R_k = G + … + G (k times), G = mP ∩ ℤⁿ.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from cli.errors import MemoryGuardError, ValidationError
from cli.logger import Logger
from cli.table import ExperimentTable
from constants.numeric import SUMSET_LIMIT
from quantize.experiments import per_level
from toric.polytope import LatticePolytope, lattice_points

COLUMNS = ('m', 'k', 'dim_subring', 'dim_full', 'ratio')


def _check_positive(name: str, value: int) -> int:
    if value < 1:
        raise ValidationError(f"{name} ≥ 1 required, got {value!r}")
    return int(value)


def _box_size(p: LatticePolytope, scale: int) -> int:
    """
    Integer points of the bounding box of scale·P, an upper bound for every set living in it.
    """
    low, high = p.bounding_box
    return math.prod(math.floor(scale * hi) - math.ceil(scale * lo) + 1 for lo, hi in zip(low, high))


def _unique_rows(points: np.ndarray) -> np.ndarray:
    # lexicographic, like lattice_points
    return np.unique(points, axis=0)


@dataclass(frozen=True, eq=False)
class SumsetState:
    """
    R_k for the generators G = mP ∩ ℤⁿ, rows sorted lexicographically.
    """
    polytope: LatticePolytope
    m: int
    k: int
    generators: np.ndarray
    reachable: np.ndarray

    @classmethod
    def initial(cls, p: LatticePolytope, m: int) -> 'SumsetState':
        m = _check_positive('m', m)
        generators = lattice_points(p, m)
        if len(generators) == 0:
            raise ValidationError(f"{m}P contains no lattice point")
        return cls(p, m, 1, generators, generators)

    def __len__(self):
        return len(self.reachable)

    def step(self) -> 'SumsetState':
        """
        R_{k+1} = R_k + G.
        """
        size = _box_size(self.polytope, (self.k + 1) * self.m)
        if size > SUMSET_LIMIT:
            raise MemoryGuardError(f"sumset of level {(self.k + 1) * self.m} spans {size} points, "
                                   f"beyond {SUMSET_LIMIT}")
        reached = self.reachable + self.generators[0]
        # one generator at a time keeps the intermediate arrays at a few times |R_{k+1}| rows
        for g in self.generators[1:]:
            reached = _unique_rows(np.concatenate([reached, self.reachable + g]))
        return SumsetState(self.polytope, self.m, self.k + 1, self.generators, reached)

    def advance(self, k: int) -> 'SumsetState':
        state = self
        while state.k < k:
            state = state.step()
        return state

    def __repr__(self):
        return f"SumsetState(m={self.m}, k={self.k}, size={len(self)})"


def sumset(p: LatticePolytope, m: int, k: int) -> np.ndarray:
    return SumsetState.initial(p, m).advance(_check_positive('k', k)).reachable


def component_dim(p: LatticePolytope, m: int, k: int) -> int:
    """
    dim of the image of Sym^k H⁰(mL) in H⁰(kmL), the number of monomials reached.
    """
    return len(sumset(p, m, k))


def full_dim(p: LatticePolytope, level: int) -> int:
    return len(lattice_points(p, level))


def is_saturated(p: LatticePolytope, m: int, k: int) -> bool:
    return component_dim(p, m, k) == full_dim(p, k * m)


###
# SEMIGROUP CHECKS
###

def _is_subset(points: np.ndarray, superset: np.ndarray) -> bool:
    combined = _unique_rows(np.concatenate([superset, points]))
    return len(combined) == len(_unique_rows(superset))


def semigroup_holds(p: LatticePolytope, m: int, k: int, l: int) -> bool:
    """
    R_k + R_l ⊆ R_{k+l}.
    """
    state = SumsetState.initial(p, m)
    first = state.advance(min(k, l))
    second = first.advance(max(k, l))
    total = second.advance(k + l)
    sums = _unique_rows((first.reachable[:, None, :] + second.reachable[None, :, :]).reshape(-1, p.dim))
    return _is_subset(sums, total.reachable)


def translates_into_next(p: LatticePolytope, m: int, k: int) -> bool:
    """
    R_k + g ⊆ R_{k+1} for every generator g, so that |R_k| ≤ |R_{k+1}|.
    """
    state = SumsetState.initial(p, m).advance(_check_positive('k', k))
    following = state.step()
    return all(_is_subset(state.reachable + g, following.reachable) for g in state.generators)


###
# DENSITY
###

def _column(p: LatticePolytope, m: int, ks: Sequence[int]) -> list[tuple]:
    logger = Logger()
    rows = []
    state = SumsetState.initial(p, m)
    for k in sorted(ks):
        state = state.advance(k)
        full = full_dim(p, k * m)
        rows.append((m, k, len(state), full, len(state) / full))
        logger.log_debug(f"Subring: m={m!r} k={k!r} ratio={len(state) / full!r}")
    return rows


def threshold(table: ExperimentTable, epsilon: float) -> Optional[int]:
    """
    Least m in the table such that every row with m' ≥ m has ratio ≥ 1 - ε, None when there is none.

    Stricter than asking each column to pass from some k₀ on: every scanned k counts. tail_start gives
    that k₀ column by column.
    """
    ms = sorted(set(int(m) for m in table.column('m')))
    ratios = {m: table.where('m', m).column('ratio') for m in ms}
    best = None
    for m in reversed(ms):
        if np.min(ratios[m]) < 1 - epsilon:
            break
        best = m
    return best


def tail_start(table: ExperimentTable, m: int, epsilon: float) -> Optional[int]:
    """
    First k of the final run of scanned levels with ratio ≥ 1 - ε, None when the largest k fails.
    """
    column = table.where('m', m)
    ks = column.column('k')
    order = np.argsort(ks)
    passing = column.column('ratio')[order] >= 1 - epsilon
    start = None
    for k, ok in zip(ks[order][::-1], passing[::-1]):
        if not ok:
            break
        start = int(k)
    return start


def density_report(p: LatticePolytope, ms: Sequence[int], ks: Sequence[int], epsilons: Sequence[float] = (0.1,),
                   threads: int = 1) -> ExperimentTable:
    """
    |R_k| / #(kmP ∩ ℤⁿ) over the given ranges, with the least m per ε past which every ratio is ≥ 1 - ε
    and, per ε and m, the k from which the scanned ratios stay ≥ 1 - ε.
    """
    if not ms or not ks:
        raise ValidationError("ranges of m and k must be nonempty")
    ms = [_check_positive('m', m) for m in ms]
    ks = sorted(set(_check_positive('k', k) for k in ks))
    for epsilon in epsilons:
        if not 0 < epsilon < 1:
            raise ValidationError(f"ε must lie in (0, 1), got {epsilon!r}")
    columns = per_level(lambda m: _column(p, m, ks), ms, threads)
    table = ExperimentTable.from_rows(COLUMNS, [row for column in columns for row in column])
    table.notes['thresholds'] = {str(epsilon): threshold(table, epsilon) for epsilon in epsilons}
    table.notes['tails'] = {str(epsilon): {m: tail_start(table, m, epsilon) for m in sorted(set(ms))}
                           for epsilon in epsilons}
    Logger().log_info(f"Subring thresholds: {table.notes['thresholds']!r}")
    return table
