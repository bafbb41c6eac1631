# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Process exit codes
"""

SUCCESS = 0
VALIDATION_FAILURE = 2
NUMERICAL_GUARD = 3
