# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Norms on sections of the level-k line bundle and their Fubini–Study potentials

Sections of level k are spanned by the monomials z^α, α ∈ kP ∩ ℤⁿ, labelled by α. At x = log|z| the
monomial has size e^{⟨α,x⟩}, so sup- and L²-norms against (h^L)^k reduce to integrals of
e^{⟨α,x⟩ - kφ(x)} over the box.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional

import numpy as np
import scipy.special

from cli.errors import SubmultiplicativityError, UnboundedFiltrationError, ValidationError
from cli.logger import Logger
from normspace.norms import DiagonalSupNorm, HermitianNorm, Norm, as_labels
from quantize.model import ToricBundleModel
from toric.grid import ConvexGridFunction, Grid, GridFunction
from toric.legendre import legendre_at
from toric.polytope import LatticePolytope, lattice_points

CHUNK_ELEMENTS = 1 << 22
ANGLES = 64
HERMITIAN = 'hermitian'
SUP = 'sup'


def _label_array(labels) -> np.ndarray:
    return np.array(labels, dtype=float).reshape(len(labels), -1)


def _row_chunks(rows: int, columns: int) -> Iterable[slice]:
    step = max(1, CHUNK_ELEMENTS // max(columns, 1))
    for start in range(0, rows, step):
        yield slice(start, min(start + step, rows))


###
# DENSITIES
###

def uniform_density(grid: Grid) -> GridFunction:
    """
    Constant density of total mass 1 on the box.
    """
    volume = float(np.prod([a[-1] - a[0] for a in grid.axes]))
    return GridFunction(grid, np.full(grid.shape, 1.0 / volume))


def monge_ampere_density(m: ToricBundleModel, normalized: bool = True) -> GridFunction:
    """
    det D²φ on the box, by finite differences, clipped at 0.

    :param normalized: scale to total mass 1
    """
    phi = m.phi
    values = np.where(phi.grid.mask, phi.values, 0.0)
    spacing = phi.grid.spacing
    if phi.dim == 1:
        density = np.gradient(np.gradient(values, spacing[0]), spacing[0])
    else:
        first = np.gradient(values, *spacing)
        xx = np.gradient(first[0], spacing[0], axis=0)
        yy = np.gradient(first[1], spacing[1], axis=1)
        xy = np.gradient(first[0], spacing[1], axis=1)
        density = xx * yy - xy ** 2
    density = np.maximum(density, 0.0)
    if normalized:
        mass = float(np.sum(density * phi.grid.cell_areas))
        if mass <= 0:
            raise ValidationError("density must have positive mass")
        density = density / mass
    return GridFunction(phi.grid, density)


###
# NORMS OF MONOMIALS
###

def ban_norm(m: ToricBundleModel, k: int) -> DiagonalSupNorm:
    """
    Ban^∞_k: log‖z^α‖ = sup_x ⟨α,x⟩ - kφ(x) = k·g(α/k).

    Diagonal in the monomial basis, which is a surrogate for the true sup-norm of sums of monomials.
    """
    if k < 1:
        raise ValidationError(f"k ≥ 1 required, got {k!r}")
    points = lattice_points(m.polytope, k)
    log_weights = k * legendre_at(m.phi, points / k, coverage=m.polytope)
    return DiagonalSupNorm(as_labels(points), log_weights)


def _check_density(m: ToricBundleModel, density: GridFunction) -> np.ndarray:
    m.phi.grid.check_compatible(density.grid)
    values = np.where(density.grid.mask, density.values, 0.0)
    if np.any(values < 0):
        raise ValidationError("density must be ≥ 0")
    masses = values * density.grid.cell_areas
    if masses.sum() <= 0:
        raise ValidationError("density must have positive mass")
    return masses.reshape(-1)


def hilb_log_gram(m: ToricBundleModel, k: int, density: GridFunction, points: np.ndarray) -> np.ndarray:
    """
    log G(α,α) = log ∫ e^{2(⟨α,x⟩ - kφ(x))}·ρ(x) dx for every row α of points.
    """
    masses = _check_density(m, density)
    box = m.phi.grid
    support = masses > 0
    x = box.nodes[support]
    potential = np.where(box.mask, m.phi.values, 0.0).reshape(-1)[support]
    log_gram = np.empty(points.shape[0])
    for rows in _row_chunks(points.shape[0], x.shape[0]):
        exponents = 2 * (points[rows] @ x.T - k * potential)
        log_gram[rows] = scipy.special.logsumexp(exponents, b=masses[support], axis=1)
    return log_gram


def hilb_norm(m: ToricBundleModel, k: int, density: Optional[GridFunction] = None) -> HermitianNorm:
    """
    Hilb_k with respect to the measure ρ·dx (times the Haar measure of the torus).

    Torus invariance makes the Gram matrix diagonal.

    :param density: defaults to the normalized Monge–Ampère density of φ
    """
    if k < 1:
        raise ValidationError(f"k ≥ 1 required, got {k!r}")
    density = monge_ampere_density(m) if density is None else density
    points = lattice_points(m.polytope, k)
    log_gram = hilb_log_gram(m, k, density, points.astype(float))
    return HermitianNorm.from_log_diagonal(0.5 * log_gram, as_labels(points))


def hilb_entry(m: ToricBundleModel, k: int, alpha, beta, density: Optional[GridFunction] = None,
               angles: int = ANGLES) -> complex:
    """
    ⟨z^α, z^β⟩ by quadrature over (x, θ), without using torus invariance.
    """
    density = monge_ampere_density(m) if density is None else density
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if alpha.size != m.dim or beta.size != m.dim:
        raise ValidationError(f"labels must have {m.dim} coordinates")
    theta = 2 * np.pi * np.arange(angles) / angles
    # the angular integrand e^{i⟨α-β,θ⟩} factors over the torus coordinates
    angular = np.prod([np.mean(np.exp(1j * d * theta)) for d in alpha - beta])
    radial = np.exp(hilb_log_gram(m, k, density, ((alpha + beta) / 2)[None, :])[0])
    return complex(angular * radial)


###
# FUBINI–STUDY
###

def _log_weights(n: Norm) -> np.ndarray:
    if isinstance(n, DiagonalSupNorm):
        return n.log_weights
    if isinstance(n, HermitianNorm):
        if not n.is_diagonal:
            raise ValidationError("the Fubini–Study potential needs a diagonal norm")
        if n.labels is None:
            raise ValidationError("norm carries no labels")
        return n.log_diagonal
    raise ValidationError(f"unsupported norm {type(n).__name__}")


def fs_potential(n: Norm, k: int, grid: Grid, kind: str = HERMITIAN,
                 polytope: Optional[LatticePolytope] = None) -> ConvexGridFunction:
    """
    φ_k on the masked nodes of grid.

    - hermitian: (1/2k)·log Σ_α exp(2(⟨α,x⟩ - logWeight(α)))
    - sup: (1/k)·log Σ_α exp(⟨α,x⟩ - logWeight(α)), the exact potential of a diagonal sup norm

    :param polytope: when given, labels must lie in kP
    """
    if k < 1:
        raise ValidationError(f"k ≥ 1 required, got {k!r}")
    if kind not in (HERMITIAN, SUP):
        raise ValidationError(f"kind must be {HERMITIAN!r} or {SUP!r}, got {kind!r}")
    log_weights = _log_weights(n)
    labels = n.labels
    if not labels:
        raise ValidationError("empty label set")
    points = _label_array(labels)
    if points.shape[1] != grid.dim:
        raise ValidationError(f"labels of dimension {points.shape[1]} on a {grid.dim}-D grid")
    if polytope is not None and not np.all(polytope.contains(points / k)):
        raise ValidationError("labels must lie in kP")

    factor = 2.0 if kind == HERMITIAN else 1.0
    x = grid.masked_nodes
    values = np.full(grid.shape, np.inf)
    masked = np.empty(x.shape[0])
    for nodes in _row_chunks(x.shape[0], points.shape[0]):
        exponents = factor * (x[nodes] @ points.T - log_weights)
        masked[nodes] = scipy.special.logsumexp(exponents, axis=1) / (factor * k)
    values[grid.mask] = masked
    return ConvexGridFunction(grid, values)


###
# QUANTUM NORMS
###

def log_gap(ban: DiagonalSupNorm, hilb: HermitianNorm) -> float:
    """
    max over labels of |logWeight_ban - log-diagonal_hilb|.
    """
    if hilb.labels is None or set(hilb.labels) != set(ban.labels):
        raise ValidationError("ban and hilb norms must carry the same labels")
    return float(np.max(np.abs(ban.aligned(hilb.labels) - _log_weights(hilb))))


@dataclass(frozen=True, eq=False)
class QuantumNorms:
    k: int
    ban: DiagonalSupNorm
    hilb: HermitianNorm

    def __post_init__(self):
        if self.hilb.labels != self.ban.labels:
            raise ValidationError("labels of ban and hilb must be identical")

    @cached_property
    def bernstein_markov_gap(self) -> float:
        return log_gap(self.ban, self.hilb) / self.k

    def __repr__(self):
        return f"QuantumNorms(k={self.k}, dim={self.ban.dim})"


def quantum_norms(m: ToricBundleModel, k: int, density: Optional[GridFunction] = None) -> QuantumNorms:
    return QuantumNorms(k, ban_norm(m, k), hilb_norm(m, k, density))


def bernstein_markov_gap(m: ToricBundleModel, k: int, density: Optional[GridFunction] = None) -> float:
    """
    (1/k)·max_α |log‖z^α‖_ban - log‖z^α‖_hilb|, which tends to 0 for Bernstein–Markov measures.
    """
    logger = Logger()
    gap = quantum_norms(m, k, density).bernstein_markov_gap
    logger.log_debug(f"Bernstein–Markov gap at k={k!r}: {gap!r}")
    return gap


###
# GRADED FAMILIES
###

def submultiplicativity_witness(family: Callable[[int], DiagonalSupNorm], pairs: Iterable[tuple[int, int]],
                                tol: float = 1e-9) -> Optional[tuple[int, int, tuple, tuple]]:
    """
    First (k, l, α, β) with logWeight_{k+l}(α+β) > logWeight_k(α) + logWeight_l(β) + tol, or None.
    """
    cache: dict[int, DiagonalSupNorm] = {}

    def level(k: int) -> DiagonalSupNorm:
        if k not in cache:
            cache[k] = family(k)
        return cache[k]

    for k, l in pairs:
        first, second, total = level(k), level(l), level(k + l)
        a = _label_array(first.labels).astype(np.int64)
        b = _label_array(second.labels).astype(np.int64)
        sums = (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[1])
        try:
            combined = total.aligned([tuple(s) for s in sums]).reshape(a.shape[0], b.shape[0])
        except ValidationError:
            raise ValidationError(f"labels of level {k + l} do not contain the sums of levels {k} and {l}") from None
        bound = first.log_weights[:, None] + second.log_weights[None, :]
        excess = combined - bound - tol * (1.0 + np.abs(bound))
        if np.any(excess > 0):
            i, j = np.unravel_index(np.argmax(excess), excess.shape)
            return k, l, first.labels[i], second.labels[j]
    return None


def check_submultiplicative(family: Callable[[int], DiagonalSupNorm], pairs: Iterable[tuple[int, int]]) -> None:
    witness = submultiplicativity_witness(family, pairs)
    if witness is not None:
        raise SubmultiplicativityError(f"weights are not submultiplicative at (k, l, α, β) = {witness!r}", witness)


def linear_growth_constant(bounds: dict[int, float]) -> float:
    """
    C with |values of level k| ≤ C·k, from max |value| per level along increasing levels.

    Raises when the ratio keeps growing: the last ratio above 1 and above 1.5 times the previous one.
    """
    if not bounds:
        raise ValidationError("no levels to bound")
    levels = sorted(bounds)
    ratios = [bounds[k] / k for k in levels]
    if len(ratios) > 1 and ratios[-1] > 1.0 and ratios[-1] > 1.5 * ratios[-2]:
        raise UnboundedFiltrationError(f"values grow faster than C·k: ratio {ratios[-1]!r} at k={levels[-1]!r}")
    return float(max(ratios))
