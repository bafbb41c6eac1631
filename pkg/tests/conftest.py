# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Shared fixtures
"""

import sys

import numpy as np
import pytest

from cli.logger import Logger
from quantize.model import ToricBundleModel
from tests.helpers import fubini_study_1d
from toric.polytope import LatticePolytope


@pytest.fixture(scope='session', autouse=True)
def logger():
    logger = Logger(sys.stderr)
    logger.log_level = 3  # WARNING
    return logger


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(scope='session')
def unit_interval() -> LatticePolytope:
    return LatticePolytope.interval(0, 1)


@pytest.fixture(scope='session')
def unit_triangle() -> LatticePolytope:
    return LatticePolytope.simplex(2)


@pytest.fixture(scope='session')
def fs_model(unit_interval) -> ToricBundleModel:
    return ToricBundleModel.from_potential(unit_interval, fubini_study_1d)


@pytest.fixture(scope='session')
def twisted_fs_model(unit_interval) -> ToricBundleModel:
    # φ(x - 1): the symplectic potential gains ξ
    return ToricBundleModel.from_potential(unit_interval, lambda x: fubini_study_1d(x - 1.0))
