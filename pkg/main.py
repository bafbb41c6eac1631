# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
`Toric Lab`
===========

Numerical experiments on the quantization of toric line bundles.

    main.py validate CONFIG
    main.py run CONFIG [--out DIR] [--seed N] [--grid N] [--threads N] [--debug]
"""

import argparse
import sys

from cli import config
from cli.experiment import validate
from cli.logger import Logger
from cli.runner import run
from constants.exit_codes import SUCCESS, VALIDATION_FAILURE


def parse_arguments(argv: list[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog='toriclab',
                                     description='Numerical experiments on the quantization of toric line bundles')
    parser.add_argument('--version', action='version', version=f"%(prog)s {config.VERSION}")
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('validate', help='report every violated constraint of a configuration')
    check.add_argument('config')
    check.add_argument('--debug', action='store_true')

    execute = commands.add_parser('run', help='run the configured experiment')
    execute.add_argument('config')
    execute.add_argument('--out', dest='out_dir', help='output directory')
    execute.add_argument('--seed', type=int)
    execute.add_argument('--grid', type=int, help='grid resolution per axis')
    execute.add_argument('--threads', type=int)
    execute.add_argument('--debug', action='store_true')
    return parser.parse_args(argv)


def main(argv: list[str]) -> int:
    arguments = parse_arguments(argv)
    config.DEBUG = arguments.debug

    # Initialize logger ASAP
    logger = Logger(sys.stderr)
    if config.DEBUG:
        logger.log_level = 0  # TRACE
    else:
        logger.log_level = 2  # INFO
    logger.log_debug(f"Application started at {config.START_TIME}")

    if arguments.command == 'validate':
        violations = validate(arguments.config)
        for violation in violations:
            print(violation)
        return VALIDATION_FAILURE if violations else SUCCESS
    return run(arguments.config, out_dir=arguments.out_dir, seed=arguments.seed, grid=arguments.grid,
               threads=arguments.threads)


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
