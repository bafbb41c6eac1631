# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Asymptotic experiments of quantization

Every experiment returns an ExperimentTable. Levels are independent and run on a thread pool,
rows come back in the order of the levels.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from cli.errors import ValidationError
from cli.logger import Logger
from cli.table import ExperimentTable
from constants.numeric import FEKETE_LEVELS, INTERIOR_MARGIN
from normspace.norms import DiagonalSupNorm, as_labels
from normspace.operations import geodesic, rooftop
from normspace.spectrum import dp_distance
from quantize.model import SYMPLECTIC, ToricBundleModel
from quantize.norms import (
    SUP,
    ban_norm,
    bernstein_markov_gap,
    check_submultiplicative,
    fs_potential,
    hilb_norm,
    linear_growth_constant,
    monge_ampere_density,
    uniform_density,
)
from toric.grid import Grid, GridFunction
from toric.legendre import convex_envelope, discrete_legendre, legendre_at
from toric.mabuchi import mabuchi_dp, symplectic_geodesic

COLUMNS = ('k', 'value', 'limit', 'gap')


def check_levels(ks: Sequence[int]) -> list[int]:
    ks = [int(k) for k in ks]
    if not ks:
        raise ValidationError("at least one level k required")
    for k in ks:
        if k < 1:
            raise ValidationError(f"k ≥ 1 required, got {k!r}")
    return ks


def doubling_levels(kmax: int) -> list[int]:
    """
    1, 2, 4, … up to kmax.
    """
    if kmax < 1:
        raise ValidationError(f"k ≥ 1 required, got {kmax!r}")
    return [2 ** j for j in range(int(math.log2(kmax)) + 1)]


def per_level(function: Callable[[int], tuple], ks: Sequence[int], threads: int = 1) -> list[tuple]:
    if threads <= 1:
        return [function(k) for k in ks]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, ks))


def check_common_polytope(m0: ToricBundleModel, m1: ToricBundleModel) -> None:
    if m0.polytope.vertices != m1.polytope.vertices:
        raise ValidationError("models must share their polytope")


class RateFit(NamedTuple):
    """
    gap ≈ a/k + b·log(k)/k, an empirical ansatz.
    """
    a: float
    b: float
    residual: float


def fit_rate(table: ExperimentTable) -> RateFit:
    k = table.column('k').astype(float)
    gap = table.column('gap').astype(float)
    if k.size < 2:
        raise ValidationError("a rate fit needs at least two levels")
    design = np.column_stack([1 / k, np.log(k) / k])
    (a, b), *_ = np.linalg.lstsq(design, gap, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([a, b]) - gap)))
    return RateFit(float(a), float(b), residual)


###
# ISOMETRY
###

def isometry_experiment(m0: ToricBundleModel, m1: ToricBundleModel, p: float, ks: Sequence[int],
                        threads: int = 1) -> ExperimentTable:
    """
    d_p(Ban_k(h₀), Ban_k(h₁))/k against the Mabuchi distance of the envelopes.
    """
    check_common_polytope(m0, m1)
    ks = check_levels(ks)
    logger = Logger()
    limit = mabuchi_dp(m0.g, m1.g, p)

    def row(k: int) -> tuple:
        value = float(dp_distance(ban_norm(m0, k), ban_norm(m1, k), p)) / k
        logger.log_info(f"Isometry: k={k!r} d_p/k={value!r}")
        return k, value, limit, abs(value - limit)

    table = ExperimentTable.from_rows(COLUMNS, per_level(row, ks, threads), p=p)
    if len(ks) > 1 and max(table.column('gap')) > 0:
        fit = fit_rate(table)
        logger.log_info(f"Isometry rate fit: {fit!r}")
        table.notes['rate'] = fit._asdict()
    return table


###
# BERNSTEIN–MARKOV
###

def bernstein_markov_experiment(m: ToricBundleModel, ks: Sequence[int], density: Optional[GridFunction] = None,
                                threads: int = 1) -> ExperimentTable:
    ks = check_levels(ks)
    density = monge_ampere_density(m) if density is None else density

    def row(k: int) -> tuple:
        gap = bernstein_markov_gap(m, k, density)
        return k, gap, 0.0, gap

    return ExperimentTable.from_rows(COLUMNS, per_level(row, ks, threads))


###
# GEODESICS
###

def geodesic_quantization_experiment(m0: ToricBundleModel, m1: ToricBundleModel, k: int, t: float,
                                     density0: Optional[GridFunction] = None,
                                     density1: Optional[GridFunction] = None) -> float:
    """
    Sup over nodes of P away from ∂P of |FS(geodesic of Hilb_k norms)* - ((1-t)·g₀ + t·g₁)|.

    The potential side is compared through its Legendre transform so that both sides live on P.
    """
    check_common_polytope(m0, m1)
    if not 0 <= t <= 1:
        raise ValidationError(f"t must lie in [0, 1], got {t!r}")
    logger = Logger()
    h0 = hilb_norm(m0, k, density0)
    h1 = hilb_norm(m1, k, density1)
    potential = fs_potential(geodesic(h0, h1, t), k, m0.box, polytope=m0.polytope)
    expected = symplectic_geodesic(m0.g, m1.g, t)
    quantized = discrete_legendre(potential, expected.grid)
    interior = m0.polytope.interior_mask(expected.grid.masked_nodes, INTERIOR_MARGIN)
    deviation = float(np.max(np.abs(quantized.masked_values - expected.masked_values)[interior]))
    logger.log_info(f"Geodesic quantization: k={k!r} t={t!r} deviation={deviation!r}")
    return deviation


def geodesic_table(m0: ToricBundleModel, m1: ToricBundleModel, ks: Sequence[int], ts: Sequence[float],
                   threads: int = 1) -> ExperimentTable:
    ks = check_levels(ks)
    density0, density1 = monge_ampere_density(m0), monge_ampere_density(m1)
    cases = [(k, t) for t in ts for k in ks]

    def row(case: tuple[int, float]) -> tuple:
        k, t = case
        return k, t, geodesic_quantization_experiment(m0, m1, k, t, density0, density1)

    return ExperimentTable.from_rows(('k', 't', 'deviation'), per_level(row, cases, threads))


###
# ROOFTOPS
###

def rooftop_model(m0: ToricBundleModel, m1: ToricBundleModel) -> ToricBundleModel:
    """
    The metric max(h₀, h₁) pointwise, whose potential is min(φ₀, φ₁).
    """
    check_common_polytope(m0, m1)
    m0.phi.grid.check_compatible(m1.phi.grid)
    values = np.minimum(m0.phi.values, m1.phi.values)
    return ToricBundleModel(m0.polytope, potential=GridFunction(m0.phi.grid, values))


def rooftop_experiment(m0: ToricBundleModel, m1: ToricBundleModel, p: float, ks: Sequence[int],
                       threads: int = 1) -> ExperimentTable:
    """
    d_p(Hilb_k(h₀) ∨ Hilb_k(h₁), Hilb_k(max(h₀, h₁)))/k with a common uniform density.
    """
    ks = check_levels(ks)
    top = rooftop_model(m0, m1)
    density = uniform_density(m0.phi.grid)

    def row(k: int) -> tuple:
        roof = rooftop(hilb_norm(m0, k, density), hilb_norm(m1, k, density))
        value = float(dp_distance(roof, hilb_norm(top, k, density), p)) / k
        return k, value, 0.0, value

    return ExperimentTable.from_rows(COLUMNS, per_level(row, ks, threads), p=p)


###
# ENVELOPES
###

def envelope_model(m: ToricBundleModel) -> ToricBundleModel:
    """
    The model of the envelope of h, with potential the double Legendre transform of φ.
    """
    return ToricBundleModel(m.polytope, symplectic=m.g, authoritative=SYMPLECTIC)


def envelope_experiment(m: ToricBundleModel, ks: Sequence[int], threads: int = 1) -> ExperimentTable:
    """
    Sup over box nodes away from the box boundary of |FS(Ban_k(φ)) - P(φ)|, and the largest difference
    between the weights of φ and of its convex envelope, which vanishes.
    """
    ks = check_levels(ks)
    box = m.phi.grid
    envelope = legendre_at(m.g, box.nodes)
    hull = convex_envelope(m.phi)
    hull_model = ToricBundleModel(m.polytope, potential=hull)
    low = np.array([a[0] for a in box.axes])
    high = np.array([a[-1] for a in box.axes])
    margin = INTERIOR_MARGIN * (high - low)
    inner = np.all((box.nodes >= low + margin) & (box.nodes <= high - margin), axis=1)

    def row(k: int) -> tuple:
        ban = ban_norm(m, k)
        potential = fs_potential(ban, k, box, kind=SUP)
        value = float(np.max(np.abs(potential.values.reshape(-1) - envelope)[inner]))
        defect = float(np.max(np.abs(ban.log_weights - ban_norm(hull_model, k).log_weights)))
        return k, value, 0.0, value, defect

    return ExperimentTable.from_rows(COLUMNS + ('weight_defect',), per_level(row, ks, threads))


###
# SUBMULTIPLICATIVE FAMILIES
###

def default_pairs(kmax: int) -> list[tuple[int, int]]:
    """
    All (k, l) with k + l ≤ min(kmax, 16), and (K, K) along doubling levels.
    """
    small = [(k, l) for k in range(1, 16) for l in range(1, k + 1) if k + l <= min(kmax, 16)]
    doubling = [(K, K) for K in doubling_levels(kmax) if 2 * K <= kmax and (K, K) not in small]
    return small + doubling


def fs_limit(m: ToricBundleModel, family: Callable[[int], DiagonalSupNorm], kmax: int) -> ToricBundleModel:
    """
    The model of the limit metric of FS(N_k)^{1/k}.

    Its symplectic potential is the convex envelope of the pointwise inf over doubling levels K of g_K,
    the lower convex hull of α/K ↦ log‖z^α‖_K / K. Submultiplicative weights give g_2K ≤ g_K on the
    nodes of level K. g_K is the Legendre transform of the hard-max Fubini–Study potential
    x ↦ max_α ⟨α,x⟩/K - log‖z^α‖_K / K, which carries no log(dim)/K excess.
    """
    logger = Logger()
    target = m.g.grid
    levels = doubling_levels(min(kmax, 2 ** FEKETE_LEVELS))
    best = np.full(target.shape, np.inf)
    for K in levels:
        lattice = Grid.lattice(m.polytope, K)
        labels = as_labels(np.rint(lattice.masked_nodes * K).astype(np.int64))
        values = np.full(lattice.shape, np.inf)
        values[lattice.mask] = family(K).aligned(labels) / K
        potential = legendre_at(GridFunction(lattice, values), m.box.nodes).reshape(m.box.shape)
        g_K = discrete_legendre(GridFunction(m.box, potential), target, check_coverage=False)
        best = np.minimum(best, g_K.values)
        logger.log_debug(f"FS limit: level {K!r} of {levels[-1]!r}")
    limit = convex_envelope(GridFunction(target, best))
    return ToricBundleModel(m.polytope, symplectic=limit, authoritative=SYMPLECTIC)


def char_experiment(m: ToricBundleModel, family: Callable[[int], DiagonalSupNorm], p: float, kmax: int,
                    pairs: Optional[Sequence[tuple[int, int]]] = None, threads: int = 1) -> ExperimentTable:
    """
    d_p(N_k, Ban_k(FS(N)))/k along doubling levels for a submultiplicative bounded family N_k.

    :param m: supplies the polytope and the grids
    """
    logger = Logger()
    ks = doubling_levels(kmax)
    check_submultiplicative(family, default_pairs(kmax) if pairs is None else pairs)
    bounds = {}
    for k in ks:
        bounds[k] = float(np.max(np.abs(family(k).log_weights)))
    constant = linear_growth_constant(bounds)
    logger.log_debug(f"Char: weights bounded by {constant!r}·k")
    limit = fs_limit(m, family, kmax)

    def row(k: int) -> tuple:
        norm = family(k)
        value = float(dp_distance(norm, ban_norm(limit, k), p)) / k
        logger.log_info(f"Char: k={k!r} d_p/k={value!r}")
        return k, value, 0.0, value

    return ExperimentTable.from_rows(COLUMNS, per_level(row, ks, threads), p=p, bound=constant)
