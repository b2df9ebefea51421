"""
Logging setup for the nonlocality toolkit.

Reports go to stdout; log records go to stderr and optionally to Config.LOG_FILE.
Name, level, record format and timestamp format all come from Config.
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from ..config.settings import Config


class LoggerConfig:
    """Owns the single package logger"""

    _logger: Optional[logging.Logger] = None

    @staticmethod
    def build_formatter(log_format: Optional[str] = None, date_format: Optional[str] = None) -> logging.Formatter:
        """Formatter from explicit patterns or Config.LOG_FORMAT / Config.LOG_DATE_FORMAT"""
        return logging.Formatter(log_format or Config.LOG_FORMAT, datefmt=date_format or Config.LOG_DATE_FORMAT)

    @classmethod
    def setup_logger(
        cls,
        log_level: Optional[str] = None,
        log_file: Optional[str] = None,
        log_format: Optional[str] = None,
    ) -> logging.Logger:
        """
        (Re)configure the package logger.

        Args:
            log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL, Config.LOG_LEVEL if None
            log_file: Extra file sink, Config.LOG_FILE if None
            log_format: %-style record format, Config.LOG_FORMAT if None

        Returns:
            The logger named Config.LOGGER_NAME
        """
        level_name = (log_level or Config.LOG_LEVEL).upper()
        level = logging.getLevelName(level_name)
        if not isinstance(level, int):
            level = logging.WARNING
        log_file = log_file if log_file is not None else Config.LOG_FILE
        formatter = cls.build_formatter(log_format)

        logger = logging.getLogger(Config.LOGGER_NAME)
        logger.setLevel(level)
        logger.propagate = False
        logger.handlers.clear()

        sinks = [logging.StreamHandler(sys.stderr)]
        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            sinks.append(logging.FileHandler(log_file, encoding='utf-8'))
        for handler in sinks:
            handler.setLevel(level)
            handler.setFormatter(formatter)
            logger.addHandler(handler)

        cls._logger = logger
        return logger

    @classmethod
    def get_logger(cls) -> logging.Logger:
        """Configured logger, set up from Config on first use"""
        if cls._logger is None:
            return cls.setup_logger()
        return cls._logger


def get_logger() -> logging.Logger:
    return LoggerConfig.get_logger()
