# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

import math

import numpy as np
import pytest

from cli.errors import DimensionMismatchError, IllConditionedError, ValidationError
from normspace import (
    DiagonalSupNorm,
    HermitianNorm,
    MaxCombination,
    PulledBackNorm,
    congruent,
    dp_distance,
    geodesic,
    john_ellipsoid,
    log_relative_spectrum,
    log_volume_ratio,
    max_norm,
    restrict,
    rooftop,
    sampled_log_relative_spectrum,
    transfer_map,
)
from tests.helpers import random_gram, random_increment

E = math.e
CASES = 1000


def diag(*entries) -> HermitianNorm:
    return HermitianNorm(np.diag(entries))


def test_hermitian_norm_rejects_asymmetric_gram():
    with pytest.raises(ValidationError, match="symmetric"):
        HermitianNorm(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_hermitian_norm_rejects_indefinite_gram():
    with pytest.raises(ValidationError, match="positive-definite"):
        HermitianNorm(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_hermitian_norm_evaluation_is_positive(rng):
    norm = HermitianNorm(random_gram(rng, 4))
    x = rng.standard_normal((100, 4))
    assert np.all(norm(x) > 0)
    assert norm(np.zeros(4)) == 0


def test_diagonal_sup_norm_rejects_repeated_labels():
    with pytest.raises(ValidationError, match="distinct"):
        DiagonalSupNorm([(0,), (0,)], [0.0, 1.0])


def test_transfer_map_identity():
    norm = HermitianNorm(np.array([[2.0, 0.3], [0.3, 1.0]]))
    np.testing.assert_allclose(transfer_map(norm, norm), np.eye(2), atol=1e-12)


def test_transfer_map_diagonal_example():
    np.testing.assert_allclose(transfer_map(diag(1, 1), diag(E ** 2, E ** -4)), np.diag([E ** 2, E ** -4]))


def test_transfer_map_scaling():
    gram = np.array([[2.0, 0.3], [0.3, 1.0]])
    c = 0.7
    np.testing.assert_allclose(transfer_map(HermitianNorm(gram), HermitianNorm(math.exp(2 * c) * gram)),
                               math.exp(2 * c) * np.eye(2), atol=1e-12)


def test_transfer_map_relates_scalar_products(rng):
    for dim in range(1, 6):
        g0, g1 = random_gram(rng, dim), random_gram(rng, dim)
        a = transfer_map(HermitianNorm(g0), HermitianNorm(g1))
        np.testing.assert_allclose(g0 @ a, g1, atol=1e-10)
        # gram₀-self-adjoint with the generalized eigenvalues as spectrum
        np.testing.assert_allclose(g0 @ a, (g0 @ a).T, atol=1e-10)
        expected = np.sort(np.linalg.eigvals(np.linalg.solve(g0, g1)).real)
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(a).real), expected, rtol=1e-9)


def test_transfer_map_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        transfer_map(diag(1, 1), diag(1, 1, 1))


def test_ill_conditioned_gram_is_rejected():
    with pytest.raises(IllConditionedError):
        dp_distance(HermitianNorm(np.array([[1.0, 0.0], [0.0, 1e-13]])), HermitianNorm(np.eye(2) + 0.1), 2)


def test_dp_of_identical_norms_is_zero(rng):
    norm = HermitianNorm(random_gram(rng, 3))
    for p in (1, 2, 3, math.inf):
        assert dp_distance(norm, norm, p) == pytest.approx(0.0, abs=1e-12)


def test_dp_of_scaled_norm(rng):
    norm = HermitianNorm(random_gram(rng, 4))
    for c in (-1.3, 0.4):
        for p in (1, 2, 5):
            assert dp_distance(norm, norm.scaled(c), p) == pytest.approx(abs(c), abs=1e-10)


def test_dp_diagonal_example():
    n0, n1 = diag(1, 1), diag(E ** 2, E ** -4)
    assert dp_distance(n0, n1, 1) == pytest.approx(1.5, abs=1e-12)
    assert dp_distance(n0, n1, 2) == pytest.approx(0.5 * math.sqrt(10), abs=1e-12)
    assert dp_distance(n0, n1, math.inf) == pytest.approx(2.0, abs=1e-12)


def test_dp_half_log_transfer_convention(rng):
    # transfer eigenvalue e^{2c} ↔ λ = c
    for dim in (2, 3, 5):
        g0, g1 = random_gram(rng, dim), random_gram(rng, dim)
        a = np.linalg.eigvals(transfer_map(HermitianNorm(g0), HermitianNorm(g1))).real
        for p in (1, 2, 3):
            expected = 0.5 * (np.sum(np.abs(np.log(a)) ** p) / dim) ** (1 / p)
            assert dp_distance(HermitianNorm(g0), HermitianNorm(g1), p) == pytest.approx(expected, rel=1e-10)


def test_dp_rejects_small_exponent():
    with pytest.raises(ValidationError, match="p ≥ 1"):
        dp_distance(diag(1, 1), diag(2, 2), 0.5)


def test_dp_diagonal_sup_pair():
    labels = [(0,), (1,), (2,)]
    n0 = DiagonalSupNorm(labels, [0.0, 0.0, 0.0])
    n1 = DiagonalSupNorm(labels, [1.0, -2.0, 0.5])
    distance = dp_distance(n0, n1, 2)
    assert distance == pytest.approx(math.sqrt((1 + 4 + 0.25) / 3))
    assert distance.exact


def test_dp_diagonal_sup_pair_aligns_labels():
    n0 = DiagonalSupNorm([(0,), (1,)], [0.0, 1.0])
    n1 = DiagonalSupNorm([(1,), (0,)], [1.0, 0.0])
    assert dp_distance(n0, n1, 1) == 0


def test_diagonal_sup_pair_with_different_labels_is_unsupported():
    with pytest.raises(ValidationError, match="unsupported"):
        log_relative_spectrum(DiagonalSupNorm([(0,), (1,)], [0, 0]), DiagonalSupNorm([(0,), (2,)], [0, 0]))


def test_spectrum_of_identical_norms():
    norm = diag(2, 3, 5)
    np.testing.assert_allclose(log_relative_spectrum(norm, norm).values, 0, atol=1e-12)


def test_spectrum_hermitian_orientation_against_oracle(rng):
    n0, n1 = diag(1, 1), diag(E ** 2, E ** -4)
    spectrum = log_relative_spectrum(n0, n1)
    np.testing.assert_allclose(spectrum.values, [1.0, -2.0], atol=1e-12)
    sampled = sampled_log_relative_spectrum(n0, n1, rng, subspaces=20000, vectors=5)
    np.testing.assert_allclose(sampled, spectrum.values, atol=2e-2)


def test_spectrum_diagonal_orientation_against_oracle(rng):
    labels = [(0,), (1,)]
    n0 = DiagonalSupNorm(labels, [0.0, 0.0])
    n1 = DiagonalSupNorm(labels, [1.0, 3.0])
    spectrum = log_relative_spectrum(n0, n1)
    np.testing.assert_allclose(spectrum.values, [3.0, 1.0])
    sampled = sampled_log_relative_spectrum(n0, n1, rng, subspaces=20000, vectors=5)
    np.testing.assert_allclose(sampled, spectrum.values, atol=2e-2)


def test_diagonal_spectrum_matches_oracle_in_dimension_three(rng):
    labels = [(0,), (1,), (2,)]
    for _ in range(3):
        n0 = DiagonalSupNorm(labels, rng.uniform(-1, 1, 3))
        n1 = DiagonalSupNorm(labels, rng.uniform(-1, 1, 3))
        spectrum = log_relative_spectrum(n0, n1).values
        sampled = sampled_log_relative_spectrum(n0, n1, rng, subspaces=3000, vectors=300)
        np.testing.assert_allclose(sampled, spectrum, atol=0.2)


def test_mixed_pair_carries_half_log_dimension_uncertainty(rng):
    for dim in (2, 5, 8):
        sup = DiagonalSupNorm([(i,) for i in range(dim)], rng.uniform(-1, 1, dim))
        hermitian = HermitianNorm(random_gram(rng, dim))
        distance = dp_distance(sup, hermitian, 2)
        assert 0 < distance.uncertainty <= 0.5 * math.log(dim) + 1e-12


def test_mixed_sup_infinity_distance_is_exact_on_common_labels(rng):
    labels = [(i,) for i in range(4)]
    weights = rng.uniform(-1, 1, 4)
    sup = DiagonalSupNorm(labels, weights)
    hermitian = john_ellipsoid(sup)
    distance = dp_distance(hermitian, sup, math.inf)
    assert distance.exact
    assert distance == pytest.approx(0.5 * math.log(4))
    assert dp_distance(sup, hermitian, math.inf) == pytest.approx(distance)


def test_mixed_pair_aligns_labels():
    hermitian = HermitianNorm.from_log_diagonal([0.0, 5.0], [(0,), (1,)])
    ordered = DiagonalSupNorm([(0,), (1,)], [0.0, 5.0])
    permuted = DiagonalSupNorm([(1,), (0,)], [5.0, 0.0])
    expected = dp_distance(hermitian, ordered, 2)
    distance = dp_distance(hermitian, permuted, 2)
    assert float(distance) == pytest.approx(float(expected))
    assert float(distance) <= float(dp_distance(hermitian, permuted, math.inf)) + distance.uncertainty + 1e-12
    assert float(dp_distance(permuted, hermitian, 2)) == pytest.approx(float(expected))


def test_hermitian_pair_aligns_labels(rng):
    labels = [(0,), (1,), (2,)]
    n0 = HermitianNorm(random_gram(rng, 3), labels)
    n1 = n0.relabelled(labels[::-1])
    assert not np.allclose(n1.gram, n0.gram)
    np.testing.assert_allclose(log_relative_spectrum(n0, n1).values, 0, atol=1e-10)
    np.testing.assert_allclose(rooftop(n0, n1).gram, n0.gram, rtol=1e-8, atol=1e-8)


def test_hermitian_pair_with_different_labels_is_unsupported():
    n0 = HermitianNorm.from_log_diagonal([0.0, 1.0], [(0,), (1,)])
    n1 = HermitianNorm.from_log_diagonal([0.0, 1.0], [(0,), (2,)])
    with pytest.raises(ValidationError, match='different labels'):
        dp_distance(n0, n1, 2)


def test_geodesic_endpoints_are_exact(rng):
    n0, n1 = HermitianNorm(random_gram(rng, 3)), HermitianNorm(random_gram(rng, 3))
    assert geodesic(n0, n1, 0) is n0
    assert geodesic(n0, n1, 1) is n1


def test_geodesic_diagonal_midpoint():
    midpoint = geodesic(diag(1, 1), diag(E ** 2, E ** -4), 0.5)
    np.testing.assert_allclose(midpoint.gram, np.diag([E, E ** -2]), rtol=1e-12)


def test_geodesic_dense_path_matches_diagonal_midpoint():
    n0 = HermitianNorm(np.eye(2) * 1.0)
    n1 = HermitianNorm(np.diag([E ** 2, E ** -4]) + 0.0)
    # force the dense path by a rotation of both
    rotation = np.array([[math.cos(0.3), -math.sin(0.3)], [math.sin(0.3), math.cos(0.3)]])
    midpoint = geodesic(congruent(n0, rotation), congruent(n1, rotation), 0.5)
    np.testing.assert_allclose(midpoint.gram, rotation.T @ np.diag([E, E ** -2]) @ rotation, atol=1e-12)


def test_geodesic_rejects_times_outside_unit_interval():
    with pytest.raises(ValidationError, match=r"\[0, 1\]"):
        geodesic(diag(1, 1), diag(2, 2), 1.5)


def test_geodesic_is_constant_speed(rng):
    for _ in range(50):
        dim = int(rng.integers(1, 7))
        n0, n1 = HermitianNorm(random_gram(rng, dim)), HermitianNorm(random_gram(rng, dim))
        t, s = np.sort(rng.uniform(0, 1, 2))
        for p in (1, 2, 3):
            expected = (s - t) * dp_distance(n0, n1, p)
            actual = dp_distance(geodesic(n0, n1, t), geodesic(n0, n1, s), p)
            assert actual == pytest.approx(expected, abs=1e-9)


def test_rooftop_of_equal_norms(rng):
    norm = HermitianNorm(random_gram(rng, 3))
    np.testing.assert_allclose(rooftop(norm, norm).gram, norm.gram, rtol=1e-10)


def test_rooftop_example_and_pythagorean_identity():
    n0, n1 = diag(1, E ** 4), diag(E ** 4, 1)
    top = rooftop(n0, n1)
    np.testing.assert_allclose(top.gram, np.diag([E ** 4, E ** 4]), rtol=1e-12)
    assert dp_distance(n0, n1, 2) ** 2 == pytest.approx(4.0)
    assert dp_distance(n0, top, 2) ** 2 == pytest.approx(2.0)
    assert dp_distance(top, n1, 2) ** 2 == pytest.approx(2.0)


def test_rooftop_pythagorean_identity_and_symmetry(rng):
    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        n0, n1 = HermitianNorm(random_gram(rng, dim)), HermitianNorm(random_gram(rng, dim))
        top = rooftop(n0, n1)
        np.testing.assert_allclose(top.gram, rooftop(n1, n0).gram, rtol=1e-9, atol=1e-9)
        p = int(rng.integers(1, 4))
        left = dp_distance(n0, n1, p) ** p
        right = dp_distance(n0, top, p) ** p + dp_distance(top, n1, p) ** p
        assert left == pytest.approx(right, abs=1e-9)


def test_rooftop_dominates_both(rng):
    n0, n1 = HermitianNorm(random_gram(rng, 4)), HermitianNorm(random_gram(rng, 4))
    top = rooftop(n0, n1)
    assert np.all(log_relative_spectrum(n0, top).values >= -1e-10)
    assert np.all(log_relative_spectrum(n1, top).values >= -1e-10)


def test_max_norm_of_identical_norm_is_itself(rng):
    norm = HermitianNorm(random_gram(rng, 3))
    assert max_norm(norm, norm) is norm


def test_max_norm_of_diagonal_sup_norms():
    labels = [(0,), (1,)]
    result = max_norm(DiagonalSupNorm(labels, [0, 2]), DiagonalSupNorm(labels, [1, 0]))
    assert isinstance(result, DiagonalSupNorm)
    np.testing.assert_allclose(result.log_weights, [1, 2])


def test_max_norm_rooftop_sandwich(rng):
    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        n0, n1 = HermitianNorm(random_gram(rng, dim)), HermitianNorm(random_gram(rng, dim))
        combined = max_norm(n0, n1)
        assert isinstance(combined, MaxCombination)
        top = rooftop(n0, n1)
        x = rng.standard_normal(dim)
        value = combined(x)
        assert top(x) / math.sqrt(2) <= value * (1 + 1e-12)
        assert value <= top(x) * (1 + 1e-12)


def test_john_ellipsoid_in_dimension_one():
    norm = DiagonalSupNorm([(0,)], [0.3])
    hermitian = john_ellipsoid(norm)
    assert hermitian(np.array([2.0])) == pytest.approx(norm(np.array([2.0])))


def test_john_ellipsoid_example():
    norm = DiagonalSupNorm([(0,), (1,)], [0.0, 0.0])
    hermitian = john_ellipsoid(norm)
    x = np.array([1.0, 1.0])
    assert norm(x) == 1.0
    assert hermitian(x) == pytest.approx(math.sqrt(2))
    assert hermitian(x) <= math.sqrt(2) * norm(x) + 1e-12


def test_john_ellipsoid_inequalities_on_samples(rng):
    norm = DiagonalSupNorm([(i,) for i in range(5)], rng.uniform(-2, 2, 5))
    x = rng.standard_normal((10_000, 5))
    circumscribed = john_ellipsoid(norm)(x)
    inscribed = john_ellipsoid(norm, inscribed=True)(x)
    values = norm(x)
    assert np.all(values <= circumscribed * (1 + 1e-12))
    assert np.all(circumscribed <= math.sqrt(5) * values * (1 + 1e-12))
    assert np.all(inscribed <= values * (1 + 1e-12))
    assert np.all(values <= math.sqrt(5) * inscribed * (1 + 1e-12))


def test_restrict_to_whole_space(rng):
    norm = HermitianNorm(random_gram(rng, 3))
    np.testing.assert_allclose(restrict(norm, np.eye(3)).gram, norm.gram)


def test_restrict_to_coordinates():
    restricted = restrict(diag(1, E ** 2, E ** 4), [[1, 0, 0], [0, 1, 0]])
    np.testing.assert_allclose(restricted.gram, np.diag([1, E ** 2]))


def test_restrict_rejects_dependent_basis():
    with pytest.raises(ValidationError, match="linearly independent"):
        restrict(diag(1, 1, 1), [[1, 1, 0], [2, 2, 0]])


def test_restrict_diagonal_sup_norm():
    norm = DiagonalSupNorm([(0,), (1,), (2,)], [0.0, 1.0, 2.0])
    coordinate = restrict(norm, [[0, 0, 2], [1, 0, 0]])
    assert isinstance(coordinate, DiagonalSupNorm)
    assert coordinate.labels == ((2,), (0,))
    np.testing.assert_allclose(coordinate.log_weights, [2 + math.log(2), 0.0])
    general = restrict(norm, [[1, 1, 0]])
    assert isinstance(general, PulledBackNorm)
    assert general(np.array([3.0])) == pytest.approx(3 * E)


def test_subspace_comparison_bound(rng):
    for _ in range(CASES):
        v = int(rng.integers(2, 9))
        e = int(rng.integers(1, v))
        n0, n1 = HermitianNorm(random_gram(rng, v)), HermitianNorm(random_gram(rng, v))
        basis = rng.standard_normal((e, v))
        p = int(rng.integers(1, 4))
        c = float(dp_distance(n0, n1, math.inf))
        whole = v * dp_distance(n0, n1, p) ** p
        part = e * dp_distance(restrict(n0, basis), restrict(n1, basis), p) ** p
        bound = 2 * (v - e) * c ** p + 20 * (1 + math.log(v)) * v * p * c ** (p - 1)
        assert abs(whole - part) <= bound + 1e-9


def test_log_volume_ratio_examples():
    assert log_volume_ratio(diag(2, 3), diag(2, 3)) == pytest.approx(0.0)
    ratio = log_volume_ratio(diag(1, 1), diag(E ** 2, E ** 2))
    assert ratio == pytest.approx(2.0)
    assert dp_distance(diag(1, 1), diag(E ** 2, E ** 2), 1) == pytest.approx(ratio / 2)


def test_log_volume_ratio_and_first_distance(rng):
    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        g0 = random_gram(rng, dim)
        g1 = g0 + random_increment(rng, dim)
        ratio = log_volume_ratio(HermitianNorm(g0), HermitianNorm(g1))
        assert dp_distance(HermitianNorm(g0), HermitianNorm(g1), 1) == pytest.approx(ratio / dim, abs=1e-9)


def test_metric_axioms(rng):
    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        n1, n2, n3 = (HermitianNorm(random_gram(rng, dim)) for _ in range(3))
        for p in (1, 2, 3):
            d12, d21 = dp_distance(n1, n2, p), dp_distance(n2, n1, p)
            assert d12 == pytest.approx(d21, abs=1e-9)
            assert dp_distance(n1, n1, p) == pytest.approx(0.0, abs=1e-9)
            assert dp_distance(n1, n3, p) <= d12 + dp_distance(n2, n3, p) + 1e-9


def test_relaxed_triangle_inequality_for_mixed_norms(rng):
    def random_norm(dim):
        kind = rng.integers(0, 3)
        if kind == 0:
            return HermitianNorm(random_gram(rng, dim))
        sup = DiagonalSupNorm([(i,) for i in range(dim)], rng.uniform(-1, 1, dim))
        if kind == 1:
            return sup
        return MaxCombination(sup, HermitianNorm(random_gram(rng, dim)))

    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        n1, n2, n3 = (random_norm(dim) for _ in range(3))
        p = int(rng.integers(1, 4))
        slack = 6 * math.log(dim)
        assert dp_distance(n1, n3, p) <= dp_distance(n1, n2, p) + dp_distance(n2, n3, p) + slack + 1e-9


def test_lidskii_inequality(rng):
    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        g0 = random_gram(rng, dim)
        g1 = g0 + random_increment(rng, dim)
        g2 = g1 + random_increment(rng, dim)
        n0, n1, n2 = HermitianNorm(g0), HermitianNorm(g1), HermitianNorm(g2)
        p = int(rng.integers(1, 4))
        lhs = dp_distance(n1, n2, p) ** p
        rhs = dp_distance(n0, n2, p) ** p - dp_distance(n0, n1, p) ** p
        assert lhs <= rhs + 1e-9


def test_spectrum_chain_and_monotonicity(rng):
    for _ in range(CASES):
        dim = int(rng.integers(1, 9))
        n1, n2, n3 = (HermitianNorm(random_gram(rng, dim)) for _ in range(3))
        s12 = log_relative_spectrum(n1, n2).values
        s23 = log_relative_spectrum(n2, n3).values
        s13 = log_relative_spectrum(n1, n3).values
        assert np.all(s12 + s23[-1] <= s13 + 1e-9)
        assert np.all(s13 <= s12 + s23[0] + 1e-9)

        g1 = random_gram(rng, dim)
        g2 = g1 + random_increment(rng, dim)
        g3 = g2 + random_increment(rng, dim)
        ordered = [HermitianNorm(g) for g in (g1, g2, g3)]
        assert np.all(log_relative_spectrum(ordered[0], ordered[1]).values
                      <= log_relative_spectrum(ordered[0], ordered[2]).values + 1e-9)


def test_perturbation_stability(rng):
    for _ in range(200):
        dim = int(rng.integers(1, 9))
        n0, n1 = HermitianNorm(random_gram(rng, dim)), HermitianNorm(random_gram(rng, dim))
        c = float(rng.uniform(0, 1))
        # n2 = n1 bent by log-ratios in [-c, c] along a random n1-orthonormal basis
        q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        basis = np.linalg.solve(n1.cholesky.T, q)
        inverse = np.linalg.inv(basis)
        g2 = inverse.T @ np.diag(np.exp(2 * rng.uniform(-c, c, dim))) @ inverse
        n2 = HermitianNorm((g2 + g2.T) / 2)
        assert np.max(np.abs(log_relative_spectrum(n1, n2).values)) <= c + 1e-9
        for p in (1, 2, 3):
            assert abs(dp_distance(n0, n1, p) - dp_distance(n0, n2, p)) <= c + 1e-9


def test_basis_change_equivariance(rng):
    for _ in range(200):
        dim = int(rng.integers(1, 7))
        n0, n1 = HermitianNorm(random_gram(rng, dim)), HermitianNorm(random_gram(rng, dim))
        change = rng.standard_normal((dim, dim)) + 3 * np.eye(dim)
        moved = congruent(n0, change), congruent(n1, change)
        np.testing.assert_allclose(log_relative_spectrum(*moved).values,
                                   log_relative_spectrum(n0, n1).values, atol=1e-8)
