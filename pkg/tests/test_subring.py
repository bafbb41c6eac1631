# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

from fractions import Fraction

import numpy as np
import pytest

from cli.errors import MemoryGuardError, ValidationError
from cli.table import ExperimentTable
from subring import (
    SumsetState,
    component_dim,
    density_report,
    is_saturated,
    semigroup_holds,
    sumset,
    tail_start,
    threshold,
    translates_into_next,
)
from subring.sumsets import COLUMNS
from toric import LatticePolytope, lattice_points


@pytest.fixture(scope='module')
def half_triangle() -> LatticePolytope:
    # 3/2 times the unit triangle: mP misses lattice points of kmP for odd m
    return LatticePolytope.simplex(2, Fraction(3, 2))


def test_interval_saturates(unit_interval):
    for k in range(1, 8):
        assert component_dim(unit_interval, 2, k) == 2 * k + 1


def test_triangle_saturates(unit_triangle):
    assert component_dim(unit_triangle, 1, 4) == 15
    assert is_saturated(unit_triangle, 2, 3)


def test_sumset_is_inside_kmP(half_triangle):
    reached = sumset(half_triangle, 3, 3)
    full = {tuple(a) for a in lattice_points(half_triangle, 9)}
    assert {tuple(a) for a in reached} <= full


def test_non_saturating_ratios(half_triangle):
    ratios = [component_dim(half_triangle, 1, k) / len(lattice_points(half_triangle, k)) for k in range(1, 5)]
    assert ratios == pytest.approx([1.0, 6 / 10, 10 / 15, 15 / 28], abs=1e-15)


def test_density_report_threshold(half_triangle):
    table = density_report(half_triangle, range(1, 11), range(1, 11), epsilons=(0.1,))
    assert len(table) == 100
    ratios = table.column('ratio')
    assert np.all(ratios > 0) and np.all(ratios <= 1)
    assert table.notes['thresholds'] == {'0.1': 7}
    # even m: mP is a lattice simplex and saturates
    np.testing.assert_array_equal(table.where('m', 4).column('ratio'), 1.0)


def test_density_report_saturating_column(unit_triangle):
    table = density_report(unit_triangle, [1, 2], [1, 2, 3])
    np.testing.assert_array_equal(table.column('ratio'), 1.0)
    assert table.notes['thresholds'] == {'0.1': 1}


def test_tail_start_reads_the_final_passing_run():
    rows = [(1, 1, 0, 0, 0.5), (1, 2, 0, 0, 0.95), (1, 3, 0, 0, 0.99),
            (2, 1, 0, 0, 1.0), (2, 2, 0, 0, 1.0), (2, 3, 0, 0, 1.0),
            (3, 1, 0, 0, 1.0), (3, 2, 0, 0, 0.5), (3, 3, 0, 0, 0.8)]
    table = ExperimentTable.from_rows(COLUMNS, rows)
    assert [tail_start(table, m, 0.1) for m in (1, 2, 3)] == [2, 1, None]
    assert threshold(table, 0.1) is None
    assert threshold(table, 0.55) == 1


def test_density_report_tails(half_triangle):
    table = density_report(half_triangle, [1, 2], [1, 2, 3, 4], epsilons=(0.1,))
    # m = 1 drops to 15/28 at k = 4, m = 2 saturates
    assert table.notes['tails'] == {'0.1': {1: None, 2: 1}}


def test_density_report_is_deterministic_across_threads(half_triangle):
    serial = density_report(half_triangle, [1, 3, 5], [2, 4])
    parallel = density_report(half_triangle, [1, 3, 5], [2, 4], threads=3)
    assert serial.rows == parallel.rows


def test_semigroup(half_triangle, unit_triangle):
    for k, l in ((1, 1), (1, 2), (2, 3)):
        assert semigroup_holds(half_triangle, 1, k, l)
        assert semigroup_holds(unit_triangle, 2, k, l)
    for k in (1, 2, 3):
        assert translates_into_next(half_triangle, 3, k)


def test_sizes_do_not_decrease(half_triangle):
    state = SumsetState.initial(half_triangle, 3)
    sizes = [len(state.advance(k)) for k in range(1, 6)]
    assert sizes == sorted(sizes)


def test_invalid_ranges(unit_interval):
    with pytest.raises(ValidationError, match='m ≥ 1'):
        component_dim(unit_interval, 0, 1)
    with pytest.raises(ValidationError, match='k ≥ 1'):
        component_dim(unit_interval, 1, 0)
    with pytest.raises(ValidationError, match='nonempty'):
        density_report(unit_interval, [], [1])


def test_memory_guard(unit_triangle):
    with pytest.raises(MemoryGuardError):
        origin = np.zeros((1, 2), dtype=np.int64)
        SumsetState(unit_triangle, 4000, 1, origin, origin).step()
