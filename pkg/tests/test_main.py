"""
Test suite for configuration, logging, errors and batching
"""

import sys
import os
import io
import logging
import unittest
from contextlib import redirect_stderr
from unittest.mock import patch

# Add the project root to the import path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config.settings import Config, DevelopmentConfig, ProductionConfig, get_config
from src.utils.batching import batch_sizes, map_batches, substream
from src.utils.errors import (
    ConditioningError,
    DimensionError,
    NonlocalityError,
    ParseError,
)
from src.utils.logger import LoggerConfig, get_logger


class TestConfig(unittest.TestCase):
    """Test configuration settings"""

    def test_config_initialization(self):
        """Test config initialization"""
        config = get_config()
        self.assertIsInstance(config, Config)
        self.assertEqual(config.APP_NAME, "GHZ Network Nonlocality Toolkit")

    def test_environment_configs(self):
        self.assertIsInstance(get_config("development"), DevelopmentConfig)
        self.assertIsInstance(get_config("production"), ProductionConfig)
        self.assertIsInstance(get_config("unknown"), ProductionConfig)

    def test_defaults_validate(self):
        is_valid, errors = Config.validate()
        self.assertTrue(is_valid, errors)
        self.assertEqual(Config.DEFAULT_SEED, 20220517)
        self.assertAlmostEqual(Config.QUANTUM_MAX, 2 * 2 ** 0.5, places=12)

    def test_invalid_setting_reported(self):
        class BrokenConfig(Config):
            WORKERS = 0
            LOG_LEVEL = "LOUD"

        is_valid, errors = BrokenConfig.validate()
        self.assertFalse(is_valid)
        self.assertEqual(len(errors), 2)
        self.assertTrue(any("WORKERS" in e for e in errors))
        self.assertTrue(any("LOG_LEVEL" in e for e in errors))


class TestLogger(unittest.TestCase):
    """Test logger setup"""

    def test_logger_name_and_handlers(self):
        logger = LoggerConfig.setup_logger("INFO")
        self.assertEqual(logger.name, "ghz_nonlocality")
        self.assertEqual(logger.level, logging.INFO)
        self.assertEqual(len(logger.handlers), 1)
        self.assertIs(logger.handlers[0].stream, sys.stderr)
        LoggerConfig.setup_logger("WARNING")

    def test_format_from_config(self):
        stream = io.StringIO()
        with patch.object(Config, "LOG_FORMAT", "%(levelname)s|%(name)s|%(message)s"), redirect_stderr(stream):
            logger = LoggerConfig.setup_logger("INFO")
            logger.info("bisection converged")
        LoggerConfig.setup_logger("WARNING")
        self.assertEqual(stream.getvalue(), "INFO|ghz_nonlocality|bisection converged\n")

    def test_unknown_level_falls_back_to_warning(self):
        logger = LoggerConfig.setup_logger("LOUD")
        self.assertEqual(logger.level, logging.WARNING)

    def test_format_without_message_rejected(self):
        class QuietConfig(Config):
            LOG_FORMAT = "%(asctime)s"

        is_valid, errors = QuietConfig.validate()
        self.assertFalse(is_valid)
        self.assertTrue(any("LOG_FORMAT" in e for e in errors))

    def test_get_logger_is_shared(self):
        self.assertIs(get_logger(), get_logger())


class TestErrors(unittest.TestCase):
    """Test error hierarchy"""

    def test_errors_are_value_errors(self):
        for error in (DimensionError, ConditioningError, ParseError):
            self.assertTrue(issubclass(error, NonlocalityError))
            self.assertTrue(issubclass(error, ValueError))

    def test_parse_error_line_number(self):
        error = ParseError("bad field", 7)
        self.assertEqual(error.line_number, 7)
        self.assertIn("line 7", str(error))


class TestBatching(unittest.TestCase):
    """Test batched random work"""

    def test_batch_sizes(self):
        self.assertEqual(batch_sizes(1200, 500), [500, 500, 200])
        self.assertEqual(batch_sizes(1000, 500), [500, 500])
        self.assertEqual(batch_sizes(0, 500), [])

    def test_substreams_are_reproducible(self):
        first = substream(1, 3).random(4)
        second = substream(1, 3).random(4)
        other = substream(1, 4).random(4)
        self.assertEqual(first.tolist(), second.tolist())
        self.assertNotEqual(first.tolist(), other.tolist())

    def test_results_independent_of_workers(self):
        def task(index, size):
            return substream(5, index).integers(0, 1000, size=size).tolist()

        sizes = batch_sizes(25, 4)
        self.assertEqual(map_batches(task, sizes, workers=1), map_batches(task, sizes, workers=4))


if __name__ == '__main__':
    unittest.main()
