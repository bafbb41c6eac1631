# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Closed-form potentials of the configuration files

A potential is a JSON object with a "type" or a list of such objects, which are summed:

- affine: {"slope": [..], "offset": c}
- log1pexp: {"scale": a, "shift": b, "direction": [..]}, log(1 + e^{a(⟨d, x⟩ - b)})/a
- fubini-study: {"shift": [..]}, ½·log Σ_v e^{2⟨v, x - s⟩} over the vertices v of P
- max-affine / min-affine: {"slopes": [[..], ..], "offsets": [..]}
- gaussian: {"amplitude": A, "center": [..], "width": w}, A·e^{-|x - c|²/w²}
- grid: {"path": "file.csv"}, sampled values as written by GridFunction.to_csv

Symplectic potentials live on P and accept affine, grid and
- guillemin: ½·Σ_F ℓ_F·log ℓ_F, ℓ_F ≥ 0 the affine equations of the facets
"""

from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from cli.errors import ValidationError
from quantize.model import SYMPLECTIC, ToricBundleModel
from toric.grid import ConvexGridFunction, GridFunction
from toric.polytope import LatticePolytope

Function = Callable[[np.ndarray], np.ndarray]

POTENTIAL_TYPES = ('affine', 'log1pexp', 'fubini-study', 'max-affine', 'min-affine', 'gaussian', 'grid')
SYMPLECTIC_TYPES = ('affine', 'guillemin', 'grid')


def _vector(obj: dict[str, Any], key: str, dim: int, default: Optional[list] = None) -> np.ndarray:
    if key not in obj:
        if default is None:
            raise ValidationError(f"potential: missing field {key!r}")
        return np.asarray(default, dtype=float)
    try:
        vector = np.asarray(obj[key], dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise ValidationError(f"potential: {key!r} must be a list of numbers, got {obj[key]!r}") from None
    if vector.size != dim:
        raise ValidationError(f"potential: {key!r} must have {dim} entries, got {vector.size}")
    return vector


def _number(obj: dict[str, Any], key: str, default: Optional[float] = None) -> float:
    if key not in obj:
        if default is None:
            raise ValidationError(f"potential: missing field {key!r}")
        return default
    value = obj[key]
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not np.isfinite(value):
        raise ValidationError(f"potential: {key!r} must be a finite number, got {value!r}")
    return float(value)


def _affine_family(obj: dict[str, Any], dim: int) -> tuple[np.ndarray, np.ndarray]:
    if 'slopes' not in obj or 'offsets' not in obj:
        raise ValidationError(f"potential: missing field {'slopes' if 'slopes' not in obj else 'offsets'!r}")
    try:
        slopes = np.asarray(obj['slopes'], dtype=float).reshape(-1, dim)
        offsets = np.asarray(obj['offsets'], dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise ValidationError(f"potential: slopes must be vectors of dimension {dim}") from None
    if len(slopes) == 0 or len(slopes) != len(offsets):
        raise ValidationError("potential: one offset per slope required")
    return slopes, offsets


def _term(obj: dict[str, Any], p: LatticePolytope) -> Function:
    kind = obj.get('type')
    dim = p.dim
    if kind == 'affine':
        slope, offset = _vector(obj, 'slope', dim), _number(obj, 'offset', 0.0)
        return lambda x: x @ slope + offset
    if kind == 'log1pexp':
        scale, shift = _number(obj, 'scale', 1.0), _number(obj, 'shift', 0.0)
        direction = _vector(obj, 'direction', dim, [1.0] + [0.0] * (dim - 1))
        if scale <= 0:
            raise ValidationError(f"potential: 'scale' must be > 0, got {scale!r}")
        return lambda x: np.logaddexp(0.0, scale * (x @ direction - shift)) / scale
    if kind == 'fubini-study':
        shift = _vector(obj, 'shift', dim, [0.0] * dim)
        vertices = p.vertex_array
        return lambda x: 0.5 * np.logaddexp.reduce(2 * (x - shift) @ vertices.T, axis=-1)
    if kind in ('max-affine', 'min-affine'):
        slopes, offsets = _affine_family(obj, dim)
        reduce = np.max if kind == 'max-affine' else np.min
        return lambda x: reduce(x @ slopes.T + offsets, axis=-1)
    if kind == 'gaussian':
        amplitude, width = _number(obj, 'amplitude'), _number(obj, 'width', 1.0)
        center = _vector(obj, 'center', dim, [0.0] * dim)
        if width <= 0:
            raise ValidationError(f"potential: 'width' must be > 0, got {width!r}")
        return lambda x: amplitude * np.exp(-np.sum((x - center) ** 2, axis=-1) / width ** 2)
    raise ValidationError(f"potential: type must be one of {POTENTIAL_TYPES!r}, got {kind!r}")


def _symplectic_term(obj: dict[str, Any], p: LatticePolytope) -> Function:
    kind = obj.get('type')
    if kind == 'affine':
        slope, offset = _vector(obj, 'slope', p.dim), _number(obj, 'offset', 0.0)
        return lambda xi: xi @ slope + offset
    if kind == 'guillemin':
        normals = np.array([normal for normal, _ in p.facets], dtype=float)
        offsets = np.array([float(offset) for _, offset in p.facets])

        def guillemin(xi: np.ndarray) -> np.ndarray:
            distances = np.maximum(offsets - xi @ normals.T, 0.0)
            with np.errstate(divide='ignore', invalid='ignore'):
                terms = np.where(distances > 0, distances * np.log(np.where(distances > 0, distances, 1.0)), 0.0)
            return 0.5 * np.sum(terms, axis=-1)

        return guillemin
    raise ValidationError(f"symplectic potential: type must be one of {SYMPLECTIC_TYPES!r}, got {kind!r}")


def _terms(obj: Any) -> list[dict[str, Any]]:
    terms = obj if isinstance(obj, list) else [obj]
    if not terms or not all(isinstance(t, dict) for t in terms):
        raise ValidationError("potential: expected an object or a nonempty list of objects")
    return terms


def _grid_path(term: dict[str, Any], base_dir: Path) -> Path:
    if 'path' not in term:
        raise ValidationError("potential: missing field 'path'")
    path = Path(base_dir) / term['path']
    if not path.is_file():
        raise ValidationError(f"potential: grid file {str(path)!r} does not exist")
    return path


def parse_potential(obj: Any, p: LatticePolytope, base_dir: Path = Path('.')) -> Function | GridFunction:
    """
    A callable on (N, dim) arrays, or the sampled function of a grid file.
    """
    terms = _terms(obj)
    grids = [t for t in terms if t.get('type') == 'grid']
    if grids:
        if len(terms) != 1:
            raise ValidationError("potential: a grid file cannot be summed with other terms")
        return GridFunction.from_csv(_grid_path(grids[0], base_dir))
    functions = [_term(t, p) for t in terms]
    return lambda x: sum(f(x) for f in functions)


def parse_symplectic(obj: Any, p: LatticePolytope, base_dir: Path = Path('.')) -> Function | GridFunction:
    terms = _terms(obj)
    grids = [t for t in terms if t.get('type') == 'grid']
    if grids:
        if len(terms) != 1:
            raise ValidationError("symplectic potential: a grid file cannot be summed with other terms")
        return GridFunction.from_csv(_grid_path(grids[0], base_dir), polytope=p)
    functions = [_symplectic_term(t, p) for t in terms]
    return lambda xi: sum(f(xi) for f in functions)


def build_model(obj: dict[str, Any], p: LatticePolytope, base_dir: Path = Path('.'),
                resolution: Optional[int] = None) -> ToricBundleModel:
    """
    {"potential": ...} or {"symplectic": ...}, with an optional "polytope" overriding the shared one.
    """
    if 'polytope' in obj:
        p = LatticePolytope.from_json(obj['polytope'])
    if ('potential' in obj) == ('symplectic' in obj):
        raise ValidationError("model: exactly one of 'potential' and 'symplectic' required")
    if 'potential' in obj:
        potential = parse_potential(obj['potential'], p, base_dir)
        if isinstance(potential, GridFunction):
            return ToricBundleModel(p, potential=potential)
        return ToricBundleModel.from_potential(p, potential, resolution=resolution)
    symplectic = parse_symplectic(obj['symplectic'], p, base_dir)
    if isinstance(symplectic, GridFunction):
        return ToricBundleModel(p, symplectic=ConvexGridFunction(symplectic.grid, symplectic.values),
                                authoritative=SYMPLECTIC)
    return ToricBundleModel.from_symplectic(p, symplectic, resolution=resolution)
