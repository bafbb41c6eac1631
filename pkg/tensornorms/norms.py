# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Projective, injective, quotient and symmetric-power norms

Tensor norms of Hermitian factors reduce to singular values of the whitened coefficient matrix
L₁ᵀ·M·L₂, with gramᵢ = Lᵢ·Lᵢᵀ: the coordinates x ↦ Lᵢᵀ·x are isometries onto Euclidean spaces.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from cli.errors import DimensionMismatchError, ValidationError
from cli.logger import Logger
from constants.numeric import SYM_EV_GTOL, SYM_EV_MAXITER, SYM_EV_RESTARTS, SYM_EV_SAMPLES, SYM_EV_STEP
from normspace import HermitianNorm
from tensornorms.tensors import SymPoly, Tensor2


def _whitened(t: Tensor2, n1: HermitianNorm, n2: HermitianNorm) -> np.ndarray:
    v1, v2 = t.dims
    if n1.dim != v1:
        raise DimensionMismatchError(v1, n1.dim, "first factor dimension")
    if n2.dim != v2:
        raise DimensionMismatchError(v2, n2.dim, "second factor dimension")
    return n1.cholesky.T @ t.coefficients @ n2.cholesky


def projective_norm2(t: Tensor2, n1: HermitianNorm, n2: HermitianNorm) -> float:
    """
    inf Σ‖xᵢ‖₁·‖yᵢ‖₂ over decompositions f = Σ xᵢ⊗yᵢ, i.e. the nuclear norm of the whitened matrix.
    """
    return float(np.sum(scipy.linalg.svdvals(_whitened(t, n1, n2))))


def injective_norm2(t: Tensor2, n1: HermitianNorm, n2: HermitianNorm) -> float:
    """
    sup |f(ξ, η)| over the dual unit balls, i.e. the top singular value of the whitened matrix.
    """
    return float(scipy.linalg.svdvals(_whitened(t, n1, n2))[0])


def quotient_norm(n: HermitianNorm, surjection) -> HermitianNorm:
    """
    ‖q‖ = min{‖g‖ : π(g) = q}.

    The minimizer lies in the gram-orthogonal complement of ker π, which gives
    gram_Q = (π·gram⁻¹·πᵀ)⁻¹.
    """
    matrix = np.atleast_2d(np.asarray(surjection, dtype=float))
    if matrix.shape[1] != n.dim:
        raise DimensionMismatchError(n.dim, matrix.shape[1], "source dimension")
    if matrix.shape[0] > n.dim or np.linalg.matrix_rank(matrix) != matrix.shape[0]:
        raise ValidationError("surjection must have full row rank")
    # π·L⁻ᵀ, so that π·gram⁻¹·πᵀ = W·Wᵀ
    whitened = scipy.linalg.solve_triangular(n.cholesky, matrix.T, lower=True).T
    inverse_gram = whitened @ whitened.T
    gram = scipy.linalg.inv((inverse_gram + inverse_gram.T) / 2)
    return HermitianNorm((gram + gram.T) / 2)


@dataclass(frozen=True)
class SymEvResult:
    """
    Outcome of the evaluation-norm ascent.

    spread is max - min over the restart values; sampled_lower_bound is the best value found on
    uniformly sampled points of the sphere, which value never falls below.
    """
    value: float
    spread: float
    sampled_lower_bound: float
    restart_values: tuple[float, ...]

    def __float__(self):
        return self.value


def _sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    points = rng.standard_normal((count, dim))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def sym_ev_norm(p: SymPoly, n: HermitianNorm, rng: Optional[np.random.Generator] = None,
                restarts: int = SYM_EV_RESTARTS) -> SymEvResult:
    """
    sup |P(ξ)| over the unit sphere of the dual norm of n.

    The dual unit sphere is L·S^{v-1}, so this maximizes |P(L·z)| over unit z by projected gradient
    ascent, all restarts advancing together. A rejected step halves that restart's step size.
    """
    if p.dim != n.dim:
        raise DimensionMismatchError(n.dim, p.dim)
    logger = Logger()
    rng = np.random.default_rng(0) if rng is None else rng
    lower = n.cholesky

    def objective(z):
        return np.abs(p.evaluate(z @ lower.T))

    def ascent_direction(z):
        xi = z @ lower.T
        gradient = (np.sign(p.evaluate(xi))[:, None] * p.gradient(xi)) @ lower
        return gradient - np.sum(gradient * z, axis=1, keepdims=True) * z

    z = _sphere(rng, restarts, p.dim)
    values = objective(z)
    steps = np.full(restarts, SYM_EV_STEP)
    active = np.ones(restarts, dtype=bool)
    iterations = 0
    while np.any(active) and iterations < SYM_EV_MAXITER:
        iterations += 1
        direction = ascent_direction(z[active])
        converged = np.linalg.norm(direction, axis=1) < SYM_EV_GTOL
        candidate = z[active] + steps[active, None] * direction
        candidate /= np.linalg.norm(candidate, axis=1, keepdims=True)
        candidate_values = objective(candidate)
        accepted = candidate_values >= values[active]

        indices = np.flatnonzero(active)
        moved = indices[accepted & ~converged]
        z[moved] = candidate[accepted & ~converged]
        values[moved] = candidate_values[accepted & ~converged]
        steps[indices[~accepted]] /= 2
        stalled = steps[indices] < np.finfo(float).eps
        active[indices[converged | stalled]] = False
    if np.any(active):
        logger.log_warning(f"Evaluation-norm ascent stopped after {SYM_EV_MAXITER} iterations "
                           f"with {int(np.sum(active))} restarts unconverged")

    sampled = float(np.max(objective(_sphere(rng, SYM_EV_SAMPLES, p.dim))))
    best = float(np.max(values))
    if best < sampled:
        logger.log_warning(f"Ascent best {best!r} below the sampled bound {sampled!r}")
        best = sampled
    logger.log_debug(f"Evaluation norm {best!r} after {iterations} iterations")
    return SymEvResult(best, float(np.ptp(values)), sampled, tuple(float(v) for v in values))


class SymmetricNorms(NamedTuple):
    """
    The three norms of a degree-2 symmetric polynomial: Sym_ev ≤ Sym_ε ≤ Sym_π.
    """
    ev: float
    eps: float
    pi: float


def sym_chain_norms(p: SymPoly, n: HermitianNorm, rng: Optional[np.random.Generator] = None) -> SymmetricNorms:
    """
    Sym_ev by ascent, Sym_ε as the injective norm of the symmetric tensor, Sym_π as the quotient of the
    projective norm under symmetrization.

    The quotient infimum over preimages of S is attained at S itself: symmetrization does not increase
    the nuclear norm.
    """
    if p.degree != 2:
        raise ValidationError(f"symmetric norm chain requires degree 2, got {p.degree}")
    tensor = p.to_tensor2()
    return SymmetricNorms(
        ev=sym_ev_norm(p, n, rng).value,
        eps=injective_norm2(tensor, n, n),
        pi=projective_norm2(tensor, n, n),
    )
