# This Python file uses the following encoding: utf-8
#
# SPDX-FileCopyrightText: 2024 The toriclab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

"""
Logger singleton

Allows sharing it globally.
"""

import logging
from typing import Optional, TextIO

TRACE = 5
logging.addLevelName(TRACE, 'TRACE')

# Index is the public log level: 0 = TRACE ... 5 = CRITICAL
_LEVELS = (TRACE, logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL)

LOGGER_NAME = 'toriclab'
LOG_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'


class Logger:
    __instance = None

    _logger: logging.Logger
    _handler: Optional[logging.Handler]

    def __new__(cls, stream: Optional[TextIO] = None):
        if Logger.__instance is None:
            instance = super(Logger, cls).__new__(cls)
            instance._logger = logging.getLogger(LOGGER_NAME)
            instance._logger.addHandler(logging.NullHandler())
            instance._handler = None
            Logger.__instance = instance
        if stream is not None:
            Logger.__instance.attach(stream)
        return Logger.__instance

    def attach(self, stream: TextIO) -> None:
        """
        Sends the log to the given stream, replacing any previously attached one.
        """
        if self._handler is not None:
            self._logger.removeHandler(self._handler)
        self._handler = logging.StreamHandler(stream)
        self._handler.setFormatter(logging.Formatter(LOG_FORMAT))
        self._logger.addHandler(self._handler)

    @property
    def log_level(self) -> int:
        level = self._logger.getEffectiveLevel()
        for index, value in enumerate(_LEVELS):
            if level <= value:
                return index
        return len(_LEVELS) - 1

    @log_level.setter
    def log_level(self, level: int) -> None:
        if not 0 <= level < len(_LEVELS):
            raise ValueError(f"Log level must be within 0-{len(_LEVELS) - 1}, got {level!r}")
        self._logger.setLevel(_LEVELS[level])

    def log_trace(self, message: str) -> None:
        self._logger.log(TRACE, message)

    def log_debug(self, message: str) -> None:
        self._logger.debug(message)

    def log_info(self, message: str) -> None:
        self._logger.info(message)

    def log_warning(self, message: str) -> None:
        self._logger.warning(message)

    def log_error(self, message: str) -> None:
        self._logger.error(message)

    def log_critical(self, message: str) -> None:
        self._logger.critical(message)
