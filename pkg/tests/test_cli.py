# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from cli.errors import ValidationError
from cli.experiment import load_config, validate, validate_object
from cli.potentials import build_model, parse_potential
from cli.runner import run
from constants.exit_codes import SUCCESS, VALIDATION_FAILURE

FS = {'potential': {'type': 'fubini-study'}}


def write_config(tmp_path, **obj) -> str:
    path = tmp_path / 'experiment.json'
    path.write_text(json.dumps(obj), encoding='utf-8')
    return str(path)


def read_rows(path) -> list[dict[str, str]]:
    with open(path, newline='', encoding='utf-8') as file:
        return list(csv.DictReader(file))


def isometry_config(tmp_path, **changes) -> str:
    obj = {
        'experiment': 'isometry',
        'polytope': {'interval': [0, 1]},
        'models': [FS, FS],
        'parameters': {'p': 2, 'ks': [1, 2, 4]},
        'grid': 129,
        'out_dir': str(tmp_path / 'out'),
    }
    obj.update(changes)
    return write_config(tmp_path, **obj)


###
# VALIDATION
###

def test_valid_config_has_no_violations(tmp_path):
    assert validate(isometry_config(tmp_path)) == []


def test_level_zero_is_reported(tmp_path):
    violations = validate(isometry_config(tmp_path, parameters={'p': 2, 'ks': [0, 1]}))
    assert len(violations) == 1
    assert 'k ≥ 1' in violations[0]


def test_kmax_stands_for_doubling_levels(tmp_path):
    path = isometry_config(tmp_path, parameters={'p': 2, 'kmax': 8})
    assert validate(path) == []
    assert run(path) == SUCCESS
    rows = read_rows(tmp_path / 'out' / 'isometry.csv')
    assert [int(r['k']) for r in rows] == [1, 2, 4, 8]


def test_levels_given_twice_are_reported(tmp_path):
    violations = validate(isometry_config(tmp_path, parameters={'p': 2, 'ks': [1], 'kmax': 8}))
    assert violations == ["parameters: give either 'ks' or 'kmax', not both"]


def test_missing_vector_names_the_field():
    obj = {'experiment': 'ray-speed', 'polytope': {'interval': [0, 1]}, 'models': [FS],
           'filtration': {'type': 'monomial-linear'}, 'parameters': {'p': 2, 'ks': [1]}}
    violations = validate_object(obj)
    assert any("'vector'" in v for v in violations)


def test_every_violation_is_reported():
    obj = {'experiment': 'char', 'polytope': {'interval': [0, 1]}, 'models': [],
           'parameters': {'p': 0.5}, 'threads': 0}
    violations = validate_object(obj)
    assert any(v.startswith('models') for v in violations)
    assert any('kmax' in v for v in violations)
    assert any('p ≥ 1' in v for v in violations)
    assert any(v.startswith('threads') for v in violations)


@pytest.mark.parametrize('path', sorted((Path(__file__).parent.parent / 'configs').glob('*.json')),
                         ids=lambda path: path.stem)
def test_shipped_configs_are_valid(path):
    assert validate(path) == []


def test_unknown_experiment():
    assert 'experiment' in validate_object({'experiment': 'nope'})[0]


def test_unreadable_config(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"experiment": ', encoding='utf-8')
    assert 'invalid JSON' in validate(path)[0]
    assert 'cannot read' in validate(tmp_path / 'absent.json')[0]


def test_overrides_apply(tmp_path):
    cfg = load_config(isometry_config(tmp_path), seed=7, threads=2, grid=None)
    assert (cfg.seed, cfg.threads, cfg.grid) == (7, 2, 129)
    with pytest.raises(ValidationError):
        load_config(isometry_config(tmp_path), threads=0)


###
# POTENTIALS
###

def test_potential_terms_sum(unit_interval):
    x = np.linspace(-2, 2, 9)[:, None]
    obj = [{'type': 'affine', 'slope': [2], 'offset': 1}, {'type': 'affine', 'slope': [-1]}]
    assert np.allclose(parse_potential(obj, unit_interval)(x), x[:, 0] + 1)


def test_fubini_study_potential(unit_interval):
    x = np.linspace(-2, 2, 9)[:, None]
    expected = 0.5 * np.log1p(np.exp(2 * x[:, 0]))
    assert np.allclose(parse_potential({'type': 'fubini-study'}, unit_interval)(x), expected)


def test_model_needs_one_potential(unit_interval):
    with pytest.raises(ValidationError, match='exactly one'):
        build_model({}, unit_interval)
    with pytest.raises(ValidationError, match="missing field 'slope'"):
        parse_potential({'type': 'affine'}, unit_interval)


def test_guillemin_model_is_consistent(unit_triangle):
    model = build_model({'symplectic': {'type': 'guillemin'}}, unit_triangle, resolution=33)
    assert model.polytope.vertices == unit_triangle.vertices
    assert np.all(np.isfinite(model.g.masked_values))


###
# RUNS
###

def test_isometry_of_identical_models(tmp_path):
    assert run(isometry_config(tmp_path)) == SUCCESS
    rows = read_rows(tmp_path / 'out' / 'isometry.csv')
    assert [int(r['k']) for r in rows] == [1, 2, 4]
    assert all(float(r['value']) == 0 and float(r['gap']) == 0 for r in rows)
    manifest = json.loads((tmp_path / 'out' / 'isometry_manifest.json').read_text(encoding='utf-8'))
    assert manifest['experiment'] == 'isometry'
    assert manifest['outputs'] == ['isometry.csv']
    assert len(manifest['config_sha256']) == 64
    assert len(manifest['model_fingerprints']) == 2
    assert manifest['model_fingerprints'][0] == manifest['model_fingerprints'][1]
    assert manifest['grid_shapes'] == [[129], [129]]


def test_zero_volume_polytope_is_a_validation_failure(tmp_path):
    path = isometry_config(tmp_path, polytope={'interval': [1, 1]})
    assert run(path) == VALIDATION_FAILURE
    assert not (tmp_path / 'out').exists()


def test_uniform_filtration_spectrum(tmp_path):
    path = write_config(tmp_path, experiment='filtration-spectrum', polytope={'interval': [0, 1]}, models=[FS],
                        filtration={'type': 'monomial-linear', 'vector': [1]},
                        parameters={'ks': [64], 'moments': 3, 'bins': 16}, grid=65,
                        out_dir=str(tmp_path / 'out'), name='uniform')
    assert run(path) == SUCCESS
    rows = read_rows(tmp_path / 'out' / 'uniform.csv')
    for row in rows:
        m = int(row['moment'])
        assert float(row['limit']) == pytest.approx(1 / (m + 1), abs=1e-3)
        assert float(row['value']) == pytest.approx(1 / (m + 1), abs=m / 64)
    spectral = read_rows(tmp_path / 'out' / 'uniform_spectral.csv')
    assert len(spectral) == 16
    manifest = json.loads((tmp_path / 'out' / 'uniform_manifest.json').read_text(encoding='utf-8'))
    assert manifest['notes']['converged'] is True


def test_reruns_are_byte_identical(tmp_path):
    path = isometry_config(tmp_path, models=[FS, {'potential': {'type': 'fubini-study', 'shift': [0.5]}}])
    assert run(path) == SUCCESS
    first = (tmp_path / 'out' / 'isometry.csv').read_bytes()
    assert run(path, threads=3) == SUCCESS
    assert (tmp_path / 'out' / 'isometry.csv').read_bytes() == first


def test_out_dir_override(tmp_path):
    assert run(isometry_config(tmp_path), out_dir=str(tmp_path / 'elsewhere')) == SUCCESS
    assert (tmp_path / 'elsewhere' / 'isometry.csv').is_file()


def test_manifest_records_grid_override(tmp_path):
    assert run(isometry_config(tmp_path), grid=65) == SUCCESS
    manifest = json.loads((tmp_path / 'out' / 'isometry_manifest.json').read_text(encoding='utf-8'))
    assert manifest['grid_shapes'] == [[65], [65]]
    assert manifest['effective_config']['grid'] == 65


def test_subring_density_run(tmp_path):
    path = write_config(tmp_path, experiment='subring-density', polytope={'simplex': 2},
                        parameters={'ms': [1, 2], 'ks': [1, 2, 3]}, out_dir=str(tmp_path / 'out'))
    assert run(path) == SUCCESS
    rows = read_rows(tmp_path / 'out' / 'subring-density.csv')
    assert len(rows) == 6
    assert all(float(r['ratio']) == 1 for r in rows)
    manifest = json.loads((tmp_path / 'out' / 'subring-density_manifest.json').read_text(encoding='utf-8'))
    assert manifest['model_fingerprints'] == []
    assert manifest['notes']['thresholds'] == {'0.1': 1}
