"""
Tests for count files, point evaluation and bootstrap error bars
"""

import sys
import os
import io
import math
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.analytics.statistics import bootstrap_sigma, evaluate_counts, evaluation_settings
from src.datasets.counts import (
    CountsTable,
    counts_to_probabilities,
    load_counts,
    load_ghz3_fixture,
    sample_counts,
    write_counts,
)
from src.quantum.measurement import ghz3_layout, outcome_probabilities
from src.quantum.states import ghz_state
from src.utils.errors import DomainError, LayoutError, NormalizationError, ParseError

HEADER = "setting,ppp,ppm,pmp,pmm,mpp,mpm,mmp,mmm\n"


def _rows_without(table: CountsTable, key: str) -> dict:
    return {k: v for k, v in table.rows.items() if k != key}


class TestCountsFiles(unittest.TestCase):
    """Test parsing and writing counts CSV files"""

    def test_fixture_loads(self):
        counts = load_ghz3_fixture()
        self.assertEqual(counts.n_parties, 3)
        self.assertEqual(len(counts.rows), 12)
        self.assertEqual(counts["000"].tolist(), [1064, 9, 192, 23, 16, 250, 8, 1227])
        self.assertEqual(counts.total((1, 2, 1)), 2844)

    def test_write_is_stable(self):
        counts = load_ghz3_fixture()
        stream = io.StringIO()
        text = write_counts(counts, stream)
        self.assertEqual(stream.getvalue(), text)
        self.assertTrue(text.startswith(HEADER))
        self.assertEqual(write_counts(load_counts(text.encode("utf-8"))), text)

    def test_byte_order_mark_accepted(self):
        data = ("\ufeff" + HEADER + "000,1,0,0,0,0,0,0,1\n").encode("utf-8")
        self.assertEqual(load_counts(data).n_events, 2)

    def test_parse_errors(self):
        cases = {
            "bad header": "setting,a,b\n000,1,2\n",
            "field count": HEADER + "000,1,2,3\n",
            "duplicate": HEADER + "000,1,0,0,0,0,0,0,1\n000,1,0,0,0,0,0,0,1\n",
            "non integer": HEADER + "000,1.5,0,0,0,0,0,0,1\n",
            "negative": HEADER + "000,-1,0,0,0,0,0,0,1\n",
            "bad setting": HEADER + "0a0,1,0,0,0,0,0,0,1\n",
            "empty": "",
            "no rows": HEADER,
        }
        for name, text in cases.items():
            with self.subTest(name):
                with self.assertRaises(ParseError):
                    load_counts(text.encode("utf-8"))

    def test_parse_error_line_number(self):
        text = "# comment\n" + HEADER + "000,1,0,0,0,0,0,0,1\n001,1,0,0\n"
        with self.assertRaises(ParseError) as context:
            load_counts(text.encode("utf-8"))
        self.assertEqual(context.exception.line_number, 4)

    def test_invalid_utf8_rejected(self):
        data = b"# caf\xe9 run\n" + HEADER.encode("utf-8") + b"000,1,0,0,0,0,0,0,1\n"
        with self.assertRaises(ParseError) as context:
            load_counts(data)
        self.assertEqual(context.exception.line_number, 1)
        self.assertIn("byte 5", str(context.exception))
        data = HEADER.encode("utf-8") + b"000,1,0,0,0,0,0,0,1\n\xff\n"
        with self.assertRaises(ParseError) as context:
            load_counts(io.BytesIO(data))
        self.assertEqual(context.exception.line_number, 3)

    def test_zero_row_rejected(self):
        counts = CountsTable(3, {"000": [0] * 8})
        with self.assertRaises(NormalizationError):
            counts_to_probabilities(counts)


class TestEvaluation(unittest.TestCase):
    """Test point evaluation of counts"""

    def test_fixture_value(self):
        report = evaluate_counts(load_ghz3_fixture())
        self.assertAlmostEqual(report.f_value, 2.338, delta=0.01)
        self.assertTrue(report.violates)
        self.assertIn("B2C0", report.correlators)

    def test_missing_row(self):
        counts = load_ghz3_fixture()
        with self.assertRaises(LayoutError):
            evaluate_counts(CountsTable(3, _rows_without(counts, "111")))

    def test_sampled_ideal_counts(self):
        table = outcome_probabilities(ghz_state(3), ghz3_layout())
        counts = sample_counts(table, 50_000, seed=3)
        self.assertEqual(counts.settings, evaluation_settings(3))
        self.assertAlmostEqual(evaluate_counts(counts).f_value, 2 * np.sqrt(2), delta=0.05)


class TestBootstrap(unittest.TestCase):
    """Test bootstrap error bars"""

    @classmethod
    def setUpClass(cls):
        cls.counts = load_ghz3_fixture()
        cls.report = bootstrap_sigma(cls.counts, resamples=2000, seed=11)

    def test_fixture_sigma(self):
        self.assertTrue(0.035 <= self.report.sigma <= 0.055, self.report.sigma)
        self.assertTrue(7.0 <= self.report.sigma_violation <= 8.2, self.report.sigma_violation)
        self.assertEqual(self.report.excluded, 0)
        self.assertFalse(self.report.unstable)
        self.assertEqual(self.report.n_events, self.counts.n_events)

    def test_correlator_sigmas(self):
        sigmas = self.report.correlator_sigmas
        self.assertEqual(set(sigmas), set(self.report.report.correlators))
        for label, sigma in sigmas.items():
            self.assertTrue(0 < sigma < 0.1, label)

    def test_reproducible(self):
        again = bootstrap_sigma(self.counts, resamples=2000, seed=11, workers=1)
        self.assertEqual(again.sigma, self.report.sigma)
        other = bootstrap_sigma(self.counts, resamples=2000, seed=12)
        self.assertNotEqual(other.sigma, self.report.sigma)

    def test_scaling_shrinks_sigma(self):
        scaled = bootstrap_sigma(self.counts.scaled(100), resamples=1000, seed=11)
        self.assertAlmostEqual(scaled.f_value, self.report.f_value, places=9)
        self.assertTrue(8.5 <= self.report.sigma / scaled.sigma <= 11.5)

    def test_poisson_mode(self):
        report = bootstrap_sigma(self.counts, resamples=1000, seed=11, mode="poisson")
        self.assertEqual(report.mode, "poisson")
        self.assertTrue(0.03 <= report.sigma <= 0.07)

    def test_invalid_arguments(self):
        with self.assertRaises(DomainError):
            bootstrap_sigma(self.counts, resamples=10)
        with self.assertRaises(DomainError):
            bootstrap_sigma(self.counts, resamples=500, mode="jackknife")

    def test_unstable_resamples_flagged(self):
        rows = {}
        for setting in ghz3_layout().settings():
            key = "".join(str(s) for s in setting)
            rows[key] = [1, 19, 0, 0, 0, 0, 0, 0] if setting[2] == 1 else [10, 0, 0, 0, 0, 0, 0, 10]
        with self.assertLogs("ghz_nonlocality", level="WARNING"):
            report = bootstrap_sigma(CountsTable(3, rows), resamples=400, seed=2)
        self.assertTrue(report.unstable)
        self.assertGreater(report.excluded, 4)
        self.assertTrue(math.isfinite(report.f_value))


if __name__ == '__main__':
    unittest.main()
