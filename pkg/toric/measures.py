# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Measures on the real line: Monge–Ampère masses of 1-D convex potentials and pushforwards of
symplectic potentials
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.ndimage

from cli.errors import ValidationError
from constants.numeric import ATOM_FACTOR, ATOM_WINDOW
from toric.grid import ConvexGridFunction, GridFunction

PROBABILITY_TOL = 1e-9


def _antiderivative(s: np.ndarray, p: float) -> np.ndarray:
    """
    F with F' = |s|^p.
    """
    return np.sign(s) * np.abs(s) ** (p + 1) / (p + 1)


@dataclass(frozen=True, eq=False)
class Measure1D:
    """
    Atoms plus a histogram whose mass is spread uniformly inside each bin.
    """
    atom_locations: np.ndarray
    atom_masses: np.ndarray
    edges: np.ndarray
    bin_masses: np.ndarray

    def __post_init__(self):
        fields = {}
        for name in ('atom_locations', 'atom_masses', 'edges', 'bin_masses'):
            array = np.array(getattr(self, name), dtype=float).reshape(-1)
            if not np.all(np.isfinite(array)):
                raise ValidationError(f"{name} must be finite")
            fields[name] = array
        if fields['atom_locations'].size != fields['atom_masses'].size:
            raise ValidationError("one mass per atom required")
        if fields['bin_masses'].size and fields['edges'].size != fields['bin_masses'].size + 1:
            raise ValidationError("histogram needs one more edge than bins")
        if np.any(np.diff(fields['edges']) <= 0):
            raise ValidationError("histogram edges must increase")
        if np.any(fields['atom_masses'] < 0) or np.any(fields['bin_masses'] < 0):
            raise ValidationError("masses must be ≥ 0")
        for name, array in fields.items():
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    ###
    # CONSTRUCTORS
    ###

    @classmethod
    def from_atoms(cls, locations, masses) -> 'Measure1D':
        """
        Atoms at repeated locations are merged.
        """
        locations = np.asarray(locations, dtype=float).reshape(-1)
        masses = np.asarray(masses, dtype=float).reshape(-1)
        unique, inverse = np.unique(locations, return_inverse=True)
        return cls(unique, np.bincount(inverse, weights=masses, minlength=unique.size), [], [])

    @classmethod
    def dirac(cls, location: float, mass: float = 1.0) -> 'Measure1D':
        return cls([location], [mass], [], [])

    @classmethod
    def histogram(cls, edges, masses) -> 'Measure1D':
        return cls([], [], edges, masses)

    ###
    # INTEGRALS
    ###

    @property
    def total(self) -> float:
        return float(self.atom_masses.sum() + self.bin_masses.sum())

    @property
    def is_probability(self) -> bool:
        return abs(self.total - 1.0) <= PROBABILITY_TOL

    def normalized(self) -> 'Measure1D':
        total = self.total
        if total <= 0:
            raise ValidationError("cannot normalize a measure of zero mass")
        return Measure1D(self.atom_locations, self.atom_masses / total, self.edges, self.bin_masses / total)

    def moment(self, m: int) -> float:
        """
        ∫ s^m dμ, exact for the uniform-per-bin model.
        """
        value = float(np.sum(self.atom_masses * self.atom_locations ** m))
        if self.bin_masses.size:
            low, high = self.edges[:-1], self.edges[1:]
            averages = (high ** (m + 1) - low ** (m + 1)) / ((m + 1) * (high - low))
            value += float(np.sum(self.bin_masses * averages))
        return value

    def mean(self) -> float:
        return self.moment(1) / self.total

    def absolute_moment(self, p: float) -> float:
        """
        ∫ |s|^p dμ.
        """
        value = float(np.sum(self.atom_masses * np.abs(self.atom_locations) ** p))
        if self.bin_masses.size:
            low, high = self.edges[:-1], self.edges[1:]
            averages = (_antiderivative(high, p) - _antiderivative(low, p)) / (high - low)
            value += float(np.sum(self.bin_masses * averages))
        return value

    def lp_norm(self, p: float) -> float:
        if np.isinf(p):
            support = np.concatenate([self.atom_locations[self.atom_masses > 0],
                                      self.edges[:-1][self.bin_masses > 0], self.edges[1:][self.bin_masses > 0]])
            return float(np.max(np.abs(support))) if support.size else 0.0
        return self.absolute_moment(p) ** (1.0 / p)

    def to_csv(self, path: Path) -> None:
        with open(path, 'w', newline='', encoding='utf-8') as file:
            writer = csv.writer(file)
            writer.writerow(['kind', 'low', 'high', 'mass'])
            for location, mass in zip(self.atom_locations, self.atom_masses):
                writer.writerow(['atom', repr(float(location)), repr(float(location)), repr(float(mass))])
            for low, high, mass in zip(self.edges[:-1], self.edges[1:], self.bin_masses):
                writer.writerow(['bin', repr(float(low)), repr(float(high)), repr(float(mass))])

    def __repr__(self):
        return f"Measure1D(atoms={self.atom_locations.size}, bins={self.bin_masses.size}, total={self.total!r})"


def _merge_adjacent(indices: np.ndarray, locations: np.ndarray, masses: np.ndarray):
    """
    Runs of consecutive node indices become one atom at their barycenter.
    """
    if indices.size == 0:
        return np.empty(0), np.empty(0)
    runs = np.split(np.arange(indices.size), np.flatnonzero(np.diff(indices) > 1) + 1)
    merged_masses = np.array([masses[run].sum() for run in runs])
    merged_locations = np.array([np.average(locations[run], weights=masses[run]) for run in runs])
    return merged_locations, merged_masses


def ma_measure_1d(f: ConvexGridFunction) -> Measure1D:
    """
    The second-derivative measure of a convex function on an interval.

    Each interior node carries the jump of the slope across it. Jumps standing out of their
    neighbourhood by ATOM_FACTOR (and larger than ATOM_FACTOR·h) are kinks and become atoms; the rest
    is spread over the node's cell.
    """
    if f.dim != 1:
        raise ValidationError(f"Monge–Ampère measures are computed in dimension 1 only, got {f.dim}")
    x = f.grid.axes[0][f.grid.mask]
    y = f.masked_values
    if x.size < 3:
        raise ValidationError("resolution ≥ 3 required for a Monge–Ampère measure")
    slopes = np.diff(y) / np.diff(x)
    jumps = np.maximum(np.diff(slopes), 0.0)
    nodes = x[1:-1]
    h = float(np.min(np.diff(x)))

    local = scipy.ndimage.median_filter(jumps, size=ATOM_WINDOW, mode='nearest')
    is_atom = jumps > ATOM_FACTOR * np.maximum(local, h)
    atom_indices = np.flatnonzero(is_atom)
    locations, masses = _merge_adjacent(atom_indices, nodes, jumps)

    midpoints = (x[1:] + x[:-1]) / 2
    density = np.where(is_atom, 0.0, jumps)
    return Measure1D(locations, masses, midpoints, density)


def pushforward(g: GridFunction, bins: int, weights: Optional[np.ndarray] = None) -> Measure1D:
    """
    Law of g under the normalized uniform measure of its domain, as a histogram on [min g, max g].

    :param weights: quadrature weights on the grid, defaults to the grid's normalized ones
    """
    if bins < 1:
        raise ValidationError(f"bins ≥ 1 required, got {bins!r}")
    weights = g.grid.weights if weights is None else np.asarray(weights, dtype=float).reshape(g.grid.shape)
    values = g.masked_values
    w = weights[g.grid.mask]
    w = w / w.sum()
    low, high = float(values.min()), float(values.max())
    if high - low <= 1e-12 * (1.0 + abs(high)):
        return Measure1D.dirac(float(np.sum(w * values)))
    masses, edges = np.histogram(values, bins=bins, range=(low, high), weights=w)
    return Measure1D.histogram(edges, masses)
