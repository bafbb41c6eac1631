# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Runs a configured experiment and writes its results

Outputs go to <out_dir>/<name>.csv, extra CSV files where the experiment has them, and
<out_dir>/<name>_manifest.json recording the configuration hashes, the seed, the fingerprint and grid
shape of every model used, the version and the wall time.
"""

import functools
import json
import math
import time
from pathlib import Path
from typing import Any, Callable

import numpy as np

from cli import config
from cli.errors import NumericalGuardError, ValidationError
from cli.experiment import ExperimentConfig, exponent, load_config
from cli.logger import Logger
from cli.potentials import build_model
from cli.table import ExperimentTable
from constants.exit_codes import NUMERICAL_GUARD, SUCCESS, VALIDATION_FAILURE
from filtration.filtrations import FiltrationSpec
from filtration.rays import ray_norm
from filtration.spectral import filtration_spectrum_experiment, ray_speed_experiment, spectral_measure
from normspace.norms import DiagonalSupNorm
from quantize.experiments import (
    bernstein_markov_experiment,
    char_experiment,
    doubling_levels,
    envelope_experiment,
    geodesic_table,
    isometry_experiment,
    rooftop_experiment,
)
from quantize.model import ToricBundleModel
from quantize.norms import ban_norm, uniform_density
from subring.sumsets import density_report
from toric.polytope import LatticePolytope

DEFAULT_BINS = 64
DEFAULT_MOMENTS = 4

# name of an extra output → writer
Extras = dict[str, Callable[[Path], None]]


class Context:
    """
    The objects a configuration describes, built on demand.
    """

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.parameters = cfg.parameters
        self.polytope = LatticePolytope.from_json(cfg.polytope)

    @functools.cached_property
    def models(self) -> list[ToricBundleModel]:
        return [build_model(model, self.polytope, self.cfg.base_dir, self.cfg.grid) for model in self.cfg.models]

    @property
    def built_models(self) -> list[ToricBundleModel]:
        """
        The models the experiment actually used, none when it never asked for them.
        """
        return self.__dict__.get('models', [])

    @property
    def model(self) -> ToricBundleModel:
        return self.models[0]

    @functools.cached_property
    def filtration(self) -> FiltrationSpec:
        return FiltrationSpec.from_json(self.cfg.filtration, self.model.polytope)

    @property
    def p(self) -> float:
        return exponent(self.parameters['p'])

    @property
    def ks(self) -> list[int]:
        if 'ks' in self.parameters:
            return list(self.parameters['ks'])
        return doubling_levels(int(self.parameters['kmax']))

    def family(self) -> Callable[[int], DiagonalSupNorm]:
        spec = self.cfg.family or {'type': 'ban'}
        m = self.model
        if spec['type'] == 'scaled':
            c = float(spec['c'])
            return functools.cache(lambda k: ban_norm(m, k).scaled(c * k))
        if spec['type'] == 'ray':
            f = FiltrationSpec.from_json(spec['filtration'], m.polytope)
            t = float(spec.get('t', 1.0))
            return functools.cache(lambda k: ray_norm(ban_norm(m, k), f, t, k))
        return functools.cache(lambda k: ban_norm(m, k))


###
# EXPERIMENTS
###

def _isometry(c: Context) -> tuple[ExperimentTable, Extras]:
    return isometry_experiment(c.models[0], c.models[1], c.p, c.ks, c.cfg.threads), {}


def _geodesic(c: Context) -> tuple[ExperimentTable, Extras]:
    return geodesic_table(c.models[0], c.models[1], c.ks, c.parameters['ts'], c.cfg.threads), {}


def _filtration_spectrum(c: Context) -> tuple[ExperimentTable, Extras]:
    moments = c.parameters.get('moments', DEFAULT_MOMENTS)
    bins = c.parameters.get('bins', DEFAULT_BINS)
    table = filtration_spectrum_experiment(c.model, c.filtration, c.ks, moments, threads=c.cfg.threads)
    extras = {
        'spectral': lambda path: spectral_measure(c.model, c.filtration, bins).to_csv(path),
        'spectral_raw': lambda path: spectral_measure(c.model, c.filtration, bins, envelope=False).to_csv(path),
    }
    return table, extras


def _envelope(c: Context) -> tuple[ExperimentTable, Extras]:
    return envelope_experiment(c.model, c.ks, c.cfg.threads), {}


def _subring_density(c: Context) -> tuple[ExperimentTable, Extras]:
    epsilons = c.parameters.get('epsilons', [0.1])
    table = density_report(c.polytope, list(c.parameters['ms']), c.ks, epsilons, c.cfg.threads)
    return table, {}


def _bernstein_markov(c: Context) -> tuple[ExperimentTable, Extras]:
    density = uniform_density(c.model.box) if c.parameters.get('density') == 'uniform' else None
    return bernstein_markov_experiment(c.model, c.ks, density, c.cfg.threads), {}


def _char(c: Context) -> tuple[ExperimentTable, Extras]:
    return char_experiment(c.model, c.family(), c.p, int(c.parameters['kmax']), threads=c.cfg.threads), {}


def _rooftop(c: Context) -> tuple[ExperimentTable, Extras]:
    return rooftop_experiment(c.models[0], c.models[1], c.p, c.ks, c.cfg.threads), {}


def _ray_speed(c: Context) -> tuple[ExperimentTable, Extras]:
    return ray_speed_experiment(c.model, c.filtration, c.p, c.ks, threads=c.cfg.threads), {}


EXPERIMENTS: dict[str, Callable[[Context], tuple[ExperimentTable, Extras]]] = {
    'isometry': _isometry,
    'geodesic': _geodesic,
    'filtration-spectrum': _filtration_spectrum,
    'envelope': _envelope,
    'subring-density': _subring_density,
    'bernstein-markov': _bernstein_markov,
    'char': _char,
    'rooftop': _rooftop,
    'ray-speed': _ray_speed,
}


###
# OUTPUTS
###

def _json_safe(value: Any) -> Any:
    """
    Plain JSON values: numpy scalars unwrapped, non-finite floats as strings ("inf", "nan").
    """
    if isinstance(value, dict):
        return {str(key): _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_safe(item) for item in value]
    if isinstance(value, (np.integer, np.floating, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


def write_manifest(path: Path, cfg: ExperimentConfig, outputs: list[str], notes: dict[str, Any],
                   models: list[ToricBundleModel], started: float) -> None:
    """
    Grid shapes are those of each model's authoritative samples, after any --grid override.
    """
    effective = cfg.to_json()
    manifest = {
        'experiment': cfg.experiment,
        'version': config.VERSION,
        'config_sha256': cfg.source_hash,
        'effective_config_sha256': config.canonical_hash(effective),
        'effective_config': effective,
        'seed': cfg.seed,
        'model_fingerprints': [m.fingerprint for m in models],
        'grid_shapes': [list(getattr(m, m.authoritative).grid.shape) for m in models],
        'outputs': outputs,
        'notes': notes,
        'started': started,
        'wall_time': time.time() - started,
    }
    with open(path, 'w', encoding='utf-8') as file:
        json.dump(_json_safe(manifest), file, indent=2, sort_keys=True, allow_nan=False)
        file.write('\n')


def execute(cfg: ExperimentConfig) -> list[Path]:
    """
    Runs the experiment and writes its outputs, returning their paths, manifest last.
    """
    logger = Logger()
    started = time.time()
    logger.log_info(f"Running {cfg.experiment!r} (seed {cfg.seed!r}, threads {cfg.threads!r})")
    context = Context(cfg)
    table, extras = EXPERIMENTS[cfg.experiment](context)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / f"{cfg.stem}.csv"]
    table.to_csv(paths[0])
    for suffix, writer in extras.items():
        path = out_dir / f"{cfg.stem}_{suffix}.csv"
        writer(path)
        paths.append(path)
    manifest = out_dir / f"{cfg.stem}{config.MANIFEST_SUFFIX}"
    write_manifest(manifest, cfg, [p.name for p in paths], table.notes, context.built_models, started)
    paths.append(manifest)
    for path in paths:
        logger.log_info(f"Wrote {str(path)!r}")
    return paths


def run(path: Path, **overrides: Any) -> int:
    """
    Exit code of a run: SUCCESS, VALIDATION_FAILURE or NUMERICAL_GUARD. Other errors propagate.
    """
    logger = Logger()
    try:
        execute(load_config(Path(path), **overrides))
    except ValidationError as error:
        logger.log_error(f"Invalid experiment: {error}")
        return VALIDATION_FAILURE
    except NumericalGuardError as error:
        logger.log_error(f"Numerical guard: {error}")
        return NUMERICAL_GUARD
    return SUCCESS
