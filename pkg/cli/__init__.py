# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Command line driver
"""
