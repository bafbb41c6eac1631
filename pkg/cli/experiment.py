# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Experiment configuration: JSON file to ExperimentConfig, and its validation

Validation parses every section but computes nothing: no grid is sampled, no norm is built.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from cli import config
from cli.errors import LabError, ValidationError
from cli.potentials import parse_potential, parse_symplectic
from filtration.filtrations import FiltrationSpec
from toric.polytope import LatticePolytope

###
# REQUIREMENTS PER EXPERIMENT
###

# number of models, required parameters
REQUIREMENTS: dict[str, tuple[int, tuple[str, ...]]] = {
    'isometry': (2, ('p', 'ks')),
    'geodesic': (2, ('ks', 'ts')),
    'filtration-spectrum': (1, ('ks',)),
    'envelope': (1, ('ks',)),
    'subring-density': (0, ('ms', 'ks')),
    'bernstein-markov': (1, ('ks',)),
    'char': (1, ('p', 'kmax')),
    'rooftop': (2, ('p', 'ks')),
    'ray-speed': (1, ('p', 'ks')),
}
NEEDS_FILTRATION = ('filtration-spectrum', 'ray-speed')
FAMILY_TYPES = ('ban', 'scaled', 'ray')
DENSITIES = ('monge-ampere', 'uniform')


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    polytope: dict[str, Any]
    models: tuple[dict[str, Any], ...] = ()
    filtration: Optional[dict[str, Any]] = None
    family: Optional[dict[str, Any]] = None
    parameters: dict[str, Any] = field(default_factory=dict)
    seed: int = config.DEFAULT_SEED
    grid: Optional[int] = None
    threads: int = config.DEFAULT_THREADS
    out_dir: str = config.DEFAULT_OUT_DIR
    name: Optional[str] = None
    base_dir: Path = Path('.')
    source_hash: str = ''

    @property
    def stem(self) -> str:
        return self.name or self.experiment

    def to_json(self) -> dict[str, Any]:
        """
        The effective configuration, overrides applied.
        """
        obj = {'experiment': self.experiment, 'polytope': self.polytope, 'models': list(self.models),
               'parameters': self.parameters, 'seed': self.seed, 'grid': self.grid, 'threads': self.threads,
               'out_dir': self.out_dir, 'name': self.stem}
        if self.filtration is not None:
            obj['filtration'] = self.filtration
        if self.family is not None:
            obj['family'] = self.family
        return obj


###
# CHECKS
###

def _integers(value: Any) -> Optional[list[int]]:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return [value]
    if isinstance(value, list) and value and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        return value
    return None


def _reals(value: Any) -> Optional[list[float]]:
    values = value if isinstance(value, list) else [value]
    if not values or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        return None
    return [float(v) for v in values]


def exponent(value: Any) -> float:
    """
    p from a number or the string "inf".
    """
    return math.inf if value in ('inf', 'infinity') else float(value)


def _check_parameter(name: str, value: Any) -> list[str]:
    if name in ('ks', 'ms'):
        values = _integers(value)
        if values is None:
            return [f"parameters.{name}: expected a nonempty list of integers"]
        letter = name[0]
        return [f"parameters.{name}: {letter} ≥ 1 required, got {v!r}" for v in values if v < 1]
    if name in ('kmax', 'bins', 'moments'):
        values = _integers(value)
        if values is None or len(values) != 1 or isinstance(value, list):
            return [f"parameters.{name}: expected an integer"]
        return [] if value >= 1 else [f"parameters.{name}: {name} ≥ 1 required, got {value!r}"]
    if name == 'p':
        try:
            p = exponent(value)
        except (TypeError, ValueError):
            return [f"parameters.p: expected a number or 'inf', got {value!r}"]
        return [] if p >= 1 else [f"parameters.p: p ≥ 1 required, got {value!r}"]
    if name == 'ts':
        values = _reals(value)
        if values is None:
            return ["parameters.ts: expected a nonempty list of numbers"]
        return [f"parameters.ts: t must lie in [0, 1], got {t!r}" for t in values if not 0 <= t <= 1]
    if name == 't':
        values = _reals(value)
        if values is None or len(values) != 1:
            return ["parameters.t: expected a number"]
        return [] if values[0] >= 0 else [f"parameters.t: t ≥ 0 required, got {value!r}"]
    if name == 'epsilons':
        values = _reals(value)
        if values is None:
            return ["parameters.epsilons: expected a nonempty list of numbers"]
        return [f"parameters.epsilons: ε must lie in (0, 1), got {e!r}" for e in values if not 0 < e < 1]
    if name == 'density':
        return [] if value in DENSITIES else [f"parameters.density: expected one of {DENSITIES!r}, got {value!r}"]
    return [f"parameters: unknown parameter {name!r}"]


def _collect(violations: list[str], where: str, check: Callable[[], Any]) -> Any:
    try:
        return check()
    except LabError as error:
        message = str(error)
        violations.append(message if message.startswith(where.split('.')[-1]) else f"{where}: {message}")
    except (TypeError, ValueError, KeyError) as error:
        violations.append(f"{where}: malformed ({error!r})")
    return None


def _check_family(family: Any, p: Optional[LatticePolytope]) -> list[str]:
    if not isinstance(family, dict):
        return ["family: expected an object"]
    kind = family.get('type')
    if kind not in FAMILY_TYPES:
        return [f"family: type must be one of {FAMILY_TYPES!r}, got {kind!r}"]
    violations = []
    if kind == 'scaled' and _reals(family.get('c')) is None:
        violations.append("family: missing field 'c'")
    if kind == 'ray':
        if 'filtration' not in family:
            violations.append("family: missing field 'filtration'")
        elif p is not None:
            _collect(violations, 'family.filtration', lambda: FiltrationSpec.from_json(family['filtration'], p))
        violations += [f"family.{v}" for v in _check_parameter('t', family.get('t', 1.0))]
    return violations


def validate_object(obj: Any, base_dir: Path = Path('.')) -> list[str]:
    """
    Every violated constraint of a decoded configuration, empty when it is valid.
    """
    if not isinstance(obj, dict):
        return ["configuration: expected a JSON object"]
    violations: list[str] = []
    experiment = obj.get('experiment')
    if experiment not in config.EXPERIMENTS:
        violations.append(f"experiment: expected one of {config.EXPERIMENTS!r}, got {experiment!r}")
        return violations
    count, required = REQUIREMENTS[experiment]

    p = None
    if 'polytope' not in obj:
        violations.append("polytope: missing field 'polytope'")
    else:
        p = _collect(violations, 'polytope', lambda: LatticePolytope.from_json(obj['polytope']))

    models = obj.get('models', [])
    if not isinstance(models, list) or len(models) != count:
        violations.append(f"models: {experiment} needs {count} model(s), got {models!r:.60}")
        models = []
    for i, model in enumerate(models):
        violations += _check_model(model, p, base_dir, f"models[{i}]")

    if experiment in NEEDS_FILTRATION:
        if 'filtration' not in obj:
            violations.append("filtration: missing field 'filtration'")
        elif p is not None:
            _collect(violations, 'filtration', lambda: FiltrationSpec.from_json(obj['filtration'], p))
    if experiment == 'char':
        violations += _check_family(obj.get('family', {'type': 'ban'}), p)

    parameters = obj.get('parameters', {})
    if not isinstance(parameters, dict):
        violations.append("parameters: expected an object")
        parameters = {}
    for name in required:
        # kmax stands for the doubling levels 1, 2, 4, … up to kmax
        if name == 'ks' and 'kmax' in parameters:
            if 'ks' in parameters:
                violations.append("parameters: give either 'ks' or 'kmax', not both")
            continue
        if name not in parameters:
            violations.append(f"parameters: missing field {name!r}")
    for name, value in parameters.items():
        violations += _check_parameter(name, value)

    for name, low in (('seed', 0), ('grid', 2), ('threads', 1)):
        if name in obj and obj[name] is not None:
            value = obj[name]
            if not isinstance(value, int) or isinstance(value, bool) or value < low:
                violations.append(f"{name}: expected an integer ≥ {low}, got {value!r}")
    return violations


def _check_model(model: Any, p: Optional[LatticePolytope], base_dir: Path, where: str) -> list[str]:
    if not isinstance(model, dict):
        return [f"{where}: expected an object"]
    violations: list[str] = []
    if 'polytope' in model:
        p = _collect(violations, f"{where}.polytope", lambda: LatticePolytope.from_json(model['polytope']))
    if ('potential' in model) == ('symplectic' in model):
        violations.append(f"{where}: exactly one of 'potential' and 'symplectic' required")
    elif p is not None:
        if 'potential' in model:
            _collect(violations, f"{where}.potential", lambda: parse_potential(model['potential'], p, base_dir))
        else:
            _collect(violations, f"{where}.symplectic", lambda: parse_symplectic(model['symplectic'], p, base_dir))
    return violations


###
# LOADING
###

def read(path: Path) -> tuple[Any, str]:
    try:
        return config.load(path)
    except OSError as error:
        raise ValidationError(f"configuration: cannot read {str(path)!r}: {error.strerror}") from None
    except (UnicodeDecodeError, json.JSONDecodeError) as error:
        raise ValidationError(f"configuration: invalid JSON in {str(path)!r}: {error}") from None


def validate(path: Path) -> list[str]:
    """
    Report only: unreadable files are violations too.
    """
    try:
        obj, _ = read(path)
    except ValidationError as error:
        return [str(error)]
    return validate_object(obj, Path(path).parent)


def load_config(path: Path, **overrides: Any) -> ExperimentConfig:
    """
    The validated configuration, command-line overrides (out_dir, seed, grid, threads) applied when not None.
    """
    obj, digest = read(path)
    violations = validate_object(obj, Path(path).parent)
    if violations:
        raise ValidationError('; '.join(violations))
    values = {
        'seed': obj.get('seed', config.DEFAULT_SEED),
        'grid': obj.get('grid'),
        'threads': obj.get('threads', config.DEFAULT_THREADS),
        'out_dir': obj.get('out_dir', config.DEFAULT_OUT_DIR),
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    for name, low in (('seed', 0), ('grid', 2), ('threads', 1)):
        if values[name] is not None and values[name] < low:
            raise ValidationError(f"{name}: expected an integer ≥ {low}, got {values[name]!r}")
    return ExperimentConfig(
        experiment=obj['experiment'],
        polytope=obj['polytope'],
        models=tuple(obj.get('models', [])),
        filtration=obj.get('filtration'),
        family=obj.get('family'),
        parameters=obj.get('parameters', {}),
        name=obj.get('name'),
        base_dir=Path(path).parent,
        source_hash=digest,
        **values,
    )
