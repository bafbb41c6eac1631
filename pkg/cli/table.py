# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Result tables of experiments
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from cli.errors import ValidationError


def format_cell(value: Any) -> str:
    """
    Shortest round-trip representation, so that re-runs are byte-identical.
    """
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass(frozen=True)
class ExperimentTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...]
    notes: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        columns = tuple(self.columns)
        rows = tuple(tuple(row) for row in self.rows)
        for row in rows:
            if len(row) != len(columns):
                raise ValidationError(f"row {row!r} does not match columns {columns!r}")
        object.__setattr__(self, 'columns', columns)
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def from_rows(cls, columns: Sequence[str], rows: Sequence[Sequence[Any]], **notes) -> 'ExperimentTable':
        return cls(tuple(columns), tuple(tuple(r) for r in rows), dict(notes))

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        try:
            index = self.columns.index(name)
        except ValueError:
            raise ValidationError(f"no column {name!r} in {self.columns!r}") from None
        return np.array([row[index] for row in self.rows])

    def where(self, name: str, value: Any) -> 'ExperimentTable':
        """
        Rows whose column name equals value.
        """
        index = self.columns.index(name)
        return ExperimentTable(self.columns, tuple(r for r in self.rows if r[index] == value), self.notes)

    def to_csv(self, path: Path) -> None:
        with open(path, 'w', newline='', encoding='utf-8') as file:
            writer = csv.writer(file)
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([format_cell(value) for value in row])

    def __repr__(self):
        return f"ExperimentTable(columns={self.columns!r}, rows={len(self.rows)})"
