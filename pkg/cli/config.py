# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Configuration management
"""

import hashlib
import json
from pathlib import Path
from typing import Any

import time

from constants.numeric import DEFAULT_GRID_1D, DEFAULT_GRID_2D

START_TIME = time.time()  # Initialize ASAP
VERSION = '0.1.0'
DEBUG = False  # Overridden by --debug
DEFAULT_OUT_DIR = 'out'
DEFAULT_SEED = 0
DEFAULT_THREADS = 1
MANIFEST_SUFFIX = '_manifest.json'

EXPERIMENTS = (
    'isometry',
    'geodesic',
    'filtration-spectrum',
    'envelope',
    'subring-density',
    'bernstein-markov',
    'char',
    'rooftop',
    'ray-speed',
)


def default_grid(dim: int) -> int:
    return DEFAULT_GRID_1D if dim == 1 else DEFAULT_GRID_2D


def read_bytes(path: Path) -> bytes:
    return Path(path).read_bytes()


def load(path: Path) -> tuple[dict[str, Any], str]:
    """
    Reads a JSON configuration.

    :return: the decoded object and the sha256 of the raw bytes
    """
    raw = read_bytes(path)
    return json.loads(raw.decode('utf-8')), hashlib.sha256(raw).hexdigest()


def canonical_hash(obj: Any) -> str:
    serialized = json.dumps(obj, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(serialized.encode('utf-8')).hexdigest()
