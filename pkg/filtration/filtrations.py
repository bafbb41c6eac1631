# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Monomial filtrations of the section spaces of a toric model

Level k has the basis z^α, α ∈ kP ∩ ℤⁿ, and F^t is spanned by the monomials with jump e_k(α) ≥ t.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional

import numpy as np

from cli.errors import ValidationError
from normspace.norms import Label, as_labels
from toric.polytope import LatticePolytope, lattice_points

LINEAR = 'monomial-linear'
MIN_LINEAR = 'monomial-min-linear'
TABLES = 'tables'
KINDS = (LINEAR, MIN_LINEAR, TABLES)
FLOOR = 'floor'


@dataclass(frozen=True, eq=False)
class FiltrationSpec:
    """
    Jump values e_k(α) of a monomial filtration.

    - monomial-linear: e_k(α) = ⟨α, v⟩ + r·k, optionally rounded down
    - monomial-min-linear: e_k(α) = min_i ⟨α, v_i⟩ + r_i·k
    - tables: explicit values per level, for every lattice point of kP
    """
    polytope: LatticePolytope
    kind: str
    vectors: Optional[np.ndarray] = None
    offsets: Optional[np.ndarray] = None
    rounding: Optional[str] = None
    tables: Optional[dict[int, dict[Label, float]]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"filtration type must be one of {KINDS!r}, got {self.kind!r}")
        if self.kind == TABLES:
            self._check_tables()
            return
        vectors = np.array(self.vectors, dtype=float).reshape(-1, self.polytope.dim)
        offsets = np.array(self.offsets, dtype=float).reshape(-1)
        if vectors.shape[0] == 0 or vectors.shape[0] != offsets.size:
            raise ValidationError("one offset per vector required")
        if self.kind == LINEAR and vectors.shape[0] != 1:
            raise ValidationError("a linear filtration has a single vector")
        if not (np.all(np.isfinite(vectors)) and np.all(np.isfinite(offsets))):
            raise ValidationError("vectors and offsets must be finite")
        if self.rounding not in (None, FLOOR):
            raise ValidationError(f"rounding must be {FLOOR!r} when given, got {self.rounding!r}")
        vectors.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, 'vectors', vectors)
        object.__setattr__(self, 'offsets', offsets)

    def _check_tables(self) -> None:
        if not self.tables:
            raise ValidationError("a filtration table needs at least one level")
        tables = {}
        for k, values in self.tables.items():
            k = int(k)
            if k < 1:
                raise ValidationError(f"k ≥ 1 required, got {k!r}")
            expected = set(as_labels(lattice_points(self.polytope, k)))
            table = {tuple(int(c) for c in label): float(value) for label, value in values.items()}
            if set(table) != expected:
                raise ValidationError(f"labels of level {k} must be the lattice points of {k}P")
            if not np.all(np.isfinite(list(table.values()))):
                raise ValidationError(f"jumps of level {k} must be finite")
            tables[k] = table
        object.__setattr__(self, 'tables', tables)

    ###
    # CONSTRUCTORS
    ###

    @classmethod
    def linear(cls, p: LatticePolytope, vector, offset: float = 0.0, rounding: Optional[str] = None) -> 'FiltrationSpec':
        return cls(p, LINEAR, [vector], [offset], rounding)

    @classmethod
    def min_linear(cls, p: LatticePolytope, vectors, offsets) -> 'FiltrationSpec':
        return cls(p, MIN_LINEAR, vectors, offsets)

    @classmethod
    def from_tables(cls, p: LatticePolytope, tables: dict[int, dict[Label, float]]) -> 'FiltrationSpec':
        return cls(p, TABLES, tables=tables)

    @classmethod
    def from_json(cls, obj: dict[str, Any], p: LatticePolytope) -> 'FiltrationSpec':
        kind = obj.get('type')
        try:
            if kind == LINEAR:
                return cls.linear(p, obj['vector'], obj.get('offset', 0.0), obj.get('rounding'))
            if kind == MIN_LINEAR:
                return cls.min_linear(p, obj['vectors'], obj['offsets'])
            if kind == TABLES:
                # {"levels": {"2": [[α..., e], ...]}}
                tables = {int(k): {tuple(row[:-1]): row[-1] for row in rows} for k, rows in obj['levels'].items()}
                return cls.from_tables(p, tables)
        except KeyError as error:
            raise ValidationError(f"filtration: missing field {error.args[0]!r}") from None
        raise ValidationError(f"filtration type must be one of {KINDS!r}, got {kind!r}")

    def to_json(self) -> dict[str, Any]:
        if self.kind == LINEAR:
            obj = {'type': LINEAR, 'vector': self.vectors[0].tolist(), 'offset': float(self.offsets[0])}
            if self.rounding is not None:
                obj['rounding'] = self.rounding
            return obj
        if self.kind == MIN_LINEAR:
            return {'type': MIN_LINEAR, 'vectors': self.vectors.tolist(), 'offsets': self.offsets.tolist()}
        return {'type': TABLES,
                'levels': {str(k): [list(label) + [value] for label, value in sorted(table.items())]
                           for k, table in sorted(self.tables.items())}}

    ###
    # JUMPS
    ###

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @cached_property
    def levels(self) -> Optional[tuple[int, ...]]:
        """
        Levels carrying data, None when every level does.
        """
        return None if self.tables is None else tuple(sorted(self.tables))

    def has_level(self, k: int) -> bool:
        return k >= 1 and (self.levels is None or k in self.tables)

    def labels(self, k: int) -> tuple[Label, ...]:
        return as_labels(lattice_points(self.polytope, k))

    def jumps_at(self, k: int, points) -> np.ndarray:
        """
        e_k at the given lattice points, one per row.
        """
        points = np.asarray(points).reshape(-1, self.dim)
        if not self.has_level(k):
            raise ValidationError(f"missing level k={k!r}")
        if self.kind == TABLES:
            table = self.tables[k]
            try:
                return np.array([table[tuple(int(c) for c in row)] for row in points])
            except KeyError as error:
                raise ValidationError(f"misaligned labels: {error.args[0]!r} has no jump at level {k}") from None
        values = np.min(points @ self.vectors.T + k * self.offsets, axis=1)
        return np.floor(values) if self.rounding == FLOOR else values

    def jumps(self, k: int) -> np.ndarray:
        """
        e_k on lattice_points(P, k), in that order.
        """
        return self.jumps_at(k, lattice_points(self.polytope, k))

    def limit_function(self, xi) -> Optional[np.ndarray]:
        """
        lim e_k(kξ)/k in closed form for the formula kinds, None for tables.
        """
        if self.kind == TABLES:
            return None
        xi = np.asarray(xi, dtype=float).reshape(-1, self.dim)
        return np.min(xi @ self.vectors.T + self.offsets, axis=1)

    def __repr__(self):
        return f"FiltrationSpec({self.kind}, {self.polytope!r})"
