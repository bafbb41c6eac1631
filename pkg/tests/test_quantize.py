# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

import math

import numpy as np
import pytest

from cli.errors import SubmultiplicativityError, ValidationError
from cli.table import ExperimentTable
from normspace import DiagonalSupNorm, HermitianNorm
from quantize import (
    QuantumNorms,
    ToricBundleModel,
    ban_norm,
    bernstein_markov_experiment,
    bernstein_markov_gap,
    char_experiment,
    check_submultiplicative,
    envelope_experiment,
    fit_rate,
    fs_potential,
    geodesic_quantization_experiment,
    hilb_entry,
    hilb_norm,
    isometry_experiment,
    rooftop_experiment,
    submultiplicativity_witness,
    uniform_density,
)
from tests.helpers import fubini_study_1d
from toric import Grid, GridFunction, convex_envelope

BOX = Grid.box(-8, 8, 2049)


def flat(x: np.ndarray) -> np.ndarray:
    return np.zeros(len(x))


def bumped_fubini_study(x: np.ndarray) -> np.ndarray:
    # FS'' is ½ at 0 and the bump's is -0.6: not convex
    return fubini_study_1d(x) + 0.3 * np.exp(-x[:, 0] ** 2)


###
# MODELS
###


def test_model_sides(fs_model, unit_interval):
    assert fs_model.authoritative == 'potential'
    assert fs_model.box.shape == (2049,)
    from_g = ToricBundleModel(unit_interval, symplectic=fs_model.g, authoritative='symplectic')
    np.testing.assert_allclose(from_g.phi.values, fs_model.phi.values, atol=1e-4)


def test_model_sides_must_agree(fs_model, twisted_fs_model, unit_interval):
    ToricBundleModel(unit_interval, potential=fs_model.phi, symplectic=fs_model.g)
    with pytest.raises(ValidationError, match="disagree"):
        ToricBundleModel(unit_interval, potential=fs_model.phi, symplectic=twisted_fs_model.g)


def test_model_requires_authoritative_side(unit_interval):
    with pytest.raises(ValidationError, match="missing"):
        ToricBundleModel(unit_interval)


def test_model_fingerprint(fs_model, twisted_fs_model):
    assert fs_model.fingerprint == ToricBundleModel(fs_model.polytope, potential=fs_model.phi).fingerprint
    assert fs_model.fingerprint != twisted_fs_model.fingerprint

###
# BAN
###


def test_ban_norm_fubini_study(fs_model):
    ban = ban_norm(fs_model, 2)
    assert ban.labels == ((0,), (1,), (2,))
    assert math.exp(ban.log_weights[1]) == pytest.approx(0.5, abs=1e-5)


def test_ban_norm_rejects_zero_level(fs_model):
    with pytest.raises(ValidationError, match="k ≥ 1"):
        ban_norm(fs_model, 0)


def test_ban_weights_are_submultiplicative(fs_model, rng):
    pairs = [tuple(int(v) for v in rng.integers(1, 13, 2)) for _ in range(20)]
    assert submultiplicativity_witness(lambda k: ban_norm(fs_model, k), pairs) is None


def test_submultiplicativity_witness(fs_model):
    def family(k: int) -> DiagonalSupNorm:
        return ban_norm(fs_model, k).scaled(k ** 2)

    with pytest.raises(SubmultiplicativityError) as error:
        check_submultiplicative(family, [(1, 1)])
    assert error.value.witness[:2] == (1, 1)


def test_ban_of_envelope_is_ban(unit_interval):
    model = ToricBundleModel.from_potential(unit_interval, bumped_fubini_study)
    hull = ToricBundleModel(unit_interval, potential=convex_envelope(model.phi))
    assert not np.array_equal(hull.phi.values, model.phi.values)
    for k in (1, 3, 10, 40):
        np.testing.assert_allclose(ban_norm(model, k).log_weights, ban_norm(hull, k).log_weights, atol=1e-9)

###
# HILB
###


def test_hilb_norm_fubini_study(fs_model):
    gram = np.exp(2 * hilb_norm(fs_model, 1).log_diagonal)
    np.testing.assert_allclose(gram, [0.5, 0.5], atol=1e-4)


def test_hilb_norm_of_constant_section(unit_interval):
    model = ToricBundleModel.from_potential(unit_interval, flat)
    density = GridFunction(model.box, uniform_density(model.box).values * 3.0)
    gram = np.exp(2 * hilb_norm(model, 1, density).log_diagonal)
    assert gram[0] == pytest.approx(3.0, rel=1e-12)


def test_hilb_norm_under_shift(fs_model):
    density = uniform_density(fs_model.box)
    k = 4
    base = hilb_norm(fs_model, k, density).log_diagonal
    shifted = hilb_norm(fs_model.shifted(0.3), k, density).log_diagonal
    np.testing.assert_allclose(shifted, base - k * 0.3, atol=1e-9)


def test_hilb_norm_rejects_bad_densities(fs_model):
    with pytest.raises(ValidationError, match="positive mass"):
        hilb_norm(fs_model, 1, GridFunction(fs_model.box, np.zeros(2049)))
    with pytest.raises(ValidationError, match="≥ 0"):
        hilb_norm(fs_model, 1, GridFunction(fs_model.box, -np.ones(2049)))


def test_off_diagonal_entries_vanish(fs_model):
    hilb = hilb_norm(fs_model, 3)
    assert abs(hilb_entry(fs_model, 3, [1], [2])) < 1e-8
    assert abs(hilb_entry(fs_model, 3, [0], [3])) < 1e-8
    diagonal = hilb_entry(fs_model, 3, [1], [1])
    assert diagonal.real == pytest.approx(math.exp(2 * hilb.log_diagonal[1]), rel=1e-9)


def test_quantum_norms_need_common_labels(fs_model):
    with pytest.raises(ValidationError, match="identical"):
        QuantumNorms(2, ban_norm(fs_model, 2), hilb_norm(fs_model, 3))

###
# FUBINI–STUDY
###


def test_fs_potential_of_single_label():
    norm = DiagonalSupNorm([(2,)], [0.7])
    x = BOX.nodes[:, 0]
    for kind in ('hermitian', 'sup'):
        np.testing.assert_allclose(fs_potential(norm, 3, BOX, kind=kind).values, (2 * x - 0.7) / 3, atol=1e-12)


def test_fs_potential_of_unit_weights():
    norm = HermitianNorm.from_log_diagonal([0.0, 0.0], labels=[(0,), (1,)])
    np.testing.assert_allclose(fs_potential(norm, 1, BOX).values, fubini_study_1d(BOX.nodes), atol=1e-12)


def test_sup_and_hermitian_potentials_are_close(rng, unit_interval):
    k = 6
    norm = DiagonalSupNorm([(a,) for a in range(k + 1)], rng.uniform(-1, 1, k + 1))
    sup = fs_potential(norm, k, BOX, kind='sup').values
    hermitian = fs_potential(norm, k, BOX, kind='hermitian').values
    assert np.all(sup >= hermitian - 1e-12)
    assert np.all(sup - hermitian <= math.log(k + 1) / (2 * k) + 1e-12)


def test_fs_potential_errors(unit_interval):
    with pytest.raises(ValidationError, match="diagonal"):
        fs_potential(HermitianNorm(np.array([[2.0, 1.0], [1.0, 2.0]]), labels=[(0,), (1,)]), 1, BOX)
    with pytest.raises(ValidationError, match="labels"):
        fs_potential(HermitianNorm.euclidean(2), 1, BOX)
    with pytest.raises(ValidationError, match="kP"):
        fs_potential(DiagonalSupNorm([(0,), (3,)], [0.0, 0.0]), 1, BOX, polytope=unit_interval)


def test_requantization_lowers_weights(rng, unit_interval):
    k = 4
    norm = DiagonalSupNorm([(a,) for a in range(k + 1)], rng.uniform(-1, 1, k + 1))
    model = ToricBundleModel(unit_interval, potential=fs_potential(norm, k, BOX, kind='sup'))
    assert np.all(ban_norm(model, k).log_weights <= norm.log_weights + 1e-9)

###
# BERNSTEIN–MARKOV
###


def test_bernstein_markov_gap_of_fubini_study(fs_model):
    table = bernstein_markov_experiment(fs_model, [25, 50, 100, 200])
    gaps = table.column('value')
    expected = [math.log(k + 1) / (2 * k) for k in (25, 50, 100, 200)]
    np.testing.assert_allclose(gaps, expected, rtol=1e-3)
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 0.05


def test_bernstein_markov_gap_of_flat_metric(unit_interval):
    model = ToricBundleModel.from_potential(unit_interval, flat)
    gap = bernstein_markov_gap(model, 1, uniform_density(model.box))
    assert gap == pytest.approx(0.5 * math.log(32), rel=1e-4)


def test_bernstein_markov_gap_under_shift(fs_model):
    density = uniform_density(fs_model.box)
    assert bernstein_markov_gap(fs_model.shifted(0.4), 10, density) == \
        pytest.approx(bernstein_markov_gap(fs_model, 10, density), abs=1e-9)

###
# ISOMETRY
###


def test_isometry_of_identical_models(fs_model):
    table = isometry_experiment(fs_model, fs_model, 2, [1, 5, 20])
    np.testing.assert_array_equal(table.column('value'), 0.0)
    np.testing.assert_array_equal(table.column('gap'), 0.0)


def test_isometry_of_twisted_models(fs_model, twisted_fs_model):
    ks = [1, 2, 5, 10, 50, 200]
    d1 = isometry_experiment(fs_model, twisted_fs_model, 1, ks)
    np.testing.assert_allclose(d1.column('value'), 0.5, atol=1e-6)
    np.testing.assert_allclose(d1.column('limit'), 0.5, atol=1e-6)

    d2 = isometry_experiment(fs_model, twisted_fs_model, 2, ks)
    expected = [math.sqrt((2 * k + 1) / (6 * k)) for k in ks]
    np.testing.assert_allclose(d2.column('value'), expected, atol=1e-6)
    np.testing.assert_allclose(d2.column('limit'), 1 / math.sqrt(3), atol=1e-6)
    assert np.all(d2.column('gap') <= 2 / np.array(ks))


def test_isometry_rate_fit(fs_model, twisted_fs_model):
    table = isometry_experiment(fs_model, twisted_fs_model, 2, [50, 100, 200])
    gaps = table.column('gap')
    assert gaps[-1] < gaps[0]
    assert table.notes['rate']['residual'] < 0.1 * gaps[0]


def test_isometry_is_deterministic_across_threads(fs_model, twisted_fs_model):
    serial = isometry_experiment(fs_model, twisted_fs_model, 2, [3, 7, 11])
    parallel = isometry_experiment(fs_model, twisted_fs_model, 2, [3, 7, 11], threads=3)
    assert serial.rows == parallel.rows


def test_fit_rate_recovers_coefficients():
    ks = [10, 20, 40, 80]
    rows = [(k, 0.0, 0.0, 2 / k + 0.5 * math.log(k) / k) for k in ks]
    fit = fit_rate(ExperimentTable.from_rows(('k', 'value', 'limit', 'gap'), rows))
    assert fit.a == pytest.approx(2.0)
    assert fit.b == pytest.approx(0.5)
    assert fit.residual < 1e-12

###
# GEODESICS AND ROOFTOPS
###


def test_geodesic_quantization_of_twisted_models(fs_model, twisted_fs_model):
    for t in (0.25, 0.5, 0.75):
        coarse = geodesic_quantization_experiment(fs_model, twisted_fs_model, 50, t)
        fine = geodesic_quantization_experiment(fs_model, twisted_fs_model, 100, t)
        assert fine < coarse
        assert coarse == pytest.approx(math.log(51) / 100, abs=1e-3)


def test_geodesic_quantization_endpoint(fs_model):
    deviations = [geodesic_quantization_experiment(fs_model, fs_model, k, 0.0) for k in (10, 40)]
    assert deviations[1] < deviations[0]
    same = geodesic_quantization_experiment(fs_model, fs_model, 10, 0.6)
    assert same == pytest.approx(deviations[0], abs=1e-9)


def test_geodesic_quantization_rejects_bad_time(fs_model):
    with pytest.raises(ValidationError, match="t must lie"):
        geodesic_quantization_experiment(fs_model, fs_model, 5, 1.5)


def test_rooftop_experiment(fs_model, unit_interval):
    # crosses the Fubini–Study potential, so neither metric dominates
    crossing = ToricBundleModel.from_potential(
        unit_interval, lambda x: fubini_study_1d(x) + 0.2 * np.exp(-x[:, 0] ** 2) - 0.05)
    ks = [1, 4, 16]
    rows = rooftop_experiment(fs_model, crossing, 2, ks).column('value')
    assert rows[0] > 0
    assert np.all(rows >= 0)
    assert np.all(rows <= 0.5 * math.log(2) / np.array(ks) + 1e-9)

###
# ENVELOPES
###


def test_envelope_experiment(unit_interval):
    model = ToricBundleModel.from_potential(unit_interval, bumped_fubini_study)
    ks = [4, 16, 64]
    table = envelope_experiment(model, ks)
    values = table.column('value')
    assert np.all(np.diff(values) < 0)
    assert np.all(values <= np.log(np.array(ks) + 1) / np.array(ks) + 1e-3)
    assert np.all(table.column('weight_defect') <= 1e-9)

###
# SUBMULTIPLICATIVE FAMILIES
###


def test_char_experiment(fs_model):
    def ban(k: int) -> DiagonalSupNorm:
        return ban_norm(fs_model, k)

    def scaled(k: int) -> DiagonalSupNorm:
        return ban(k).scaled(0.25 * k)

    def bumped(k: int) -> DiagonalSupNorm:
        return ban(k).scaled(math.sqrt(k))

    # Ban_k is its own limit on the doubling levels: every row vanishes to rounding
    plain = char_experiment(fs_model, ban, 2, 128).column('value')
    assert np.all(plain < 1e-9)
    shifted = char_experiment(fs_model, scaled, 2, 128).column('value')
    np.testing.assert_allclose(shifted, plain, atol=1e-8)
    for values in (plain, shifted):
        assert values[-1] <= max(0.5 * values[0], 1e-9)
    rows = char_experiment(fs_model, bumped, 2, 128).column('value')
    assert rows[-1] < 0.5 * rows[0]
    # the √k bump vanishes after /k: |1/√k - 1/√128|
    assert rows[0] == pytest.approx(1 - 1 / math.sqrt(128), abs=1e-6)


def test_char_experiment_rejects_supermultiplicative_family(fs_model):
    with pytest.raises(SubmultiplicativityError):
        char_experiment(fs_model, lambda k: ban_norm(fs_model, k).scaled(-math.sqrt(k)), 1, 8)
