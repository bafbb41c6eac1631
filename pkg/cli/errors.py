# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Exceptions

Two families:
- ValidationError: a precondition or invariant does not hold. The message names it.
- NumericalGuardError: the inputs are valid but the computation cannot be trusted.
"""

from typing import Any, Optional


class LabError(Exception):
    pass


class ValidationError(LabError, ValueError):
    pass


class DimensionMismatchError(ValidationError):
    def __init__(self, expected: int, got: int, what: str = "dimension"):
        super().__init__(f"{what} mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class DegeneratePolytopeError(ValidationError):
    pass


class GridMismatchError(ValidationError):
    pass


class SubmultiplicativityError(ValidationError):
    """
    Raised with the first violating witness found.

    The witness is a (k, l, alpha, beta) tuple.
    """

    def __init__(self, message: str, witness: Optional[tuple[Any, ...]] = None):
        super().__init__(message)
        self.witness = witness


class UnboundedFiltrationError(ValidationError):
    pass


class NumericalGuardError(LabError, ArithmeticError):
    pass


class IllConditionedError(NumericalGuardError):
    pass


class SlopeCoverageError(NumericalGuardError):
    pass


class MemoryGuardError(NumericalGuardError):
    pass
