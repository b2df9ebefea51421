"""
Tests for the F functional, noise thresholds and the classical bound
"""

import sys
import os
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.analytics.classical import classical_bound, deterministic_table
from src.analytics.inequality import (
    c1_mean,
    collective_charlie,
    conditional_ab_correlator,
    f_from_state,
    f_score,
    i_bell,
    i_same,
    n_party_f,
)
from src.analytics.thresholds import (
    fidelity_threshold,
    fidelity_threshold_numeric,
    threshold_result,
    visibility_threshold,
    visibility_threshold_numeric,
    white_noise_f,
    white_noise_fidelity,
    white_noise_table,
)
from src.quantum.measurement import ghz3_layout, n_party_layout, outcome_probabilities, required_settings
from src.quantum.states import QuantumState, ghz_state, mix_white_noise, product_state
from src.utils.errors import ConditioningError, DomainError, LayoutError

SQRT2 = np.sqrt(2)


class TestFunctional(unittest.TestCase):
    """Test F on exact tables"""

    def test_ideal_ghz_reaches_quantum_maximum(self):
        table = outcome_probabilities(ghz_state(3), ghz3_layout())
        report = f_score(table)
        self.assertAlmostEqual(report.f_value, 2 * SQRT2, delta=1e-9)
        self.assertAlmostEqual(report.i_bell, 2 * SQRT2, delta=1e-9)
        self.assertAlmostEqual(report.i_same, 2.0, delta=1e-9)
        self.assertAlmostEqual(report.c1_mean, 0.0, delta=1e-9)
        self.assertTrue(report.violates)

    def test_correlator_breakdown(self):
        table = outcome_probabilities(ghz_state(3), ghz3_layout())
        self.assertAlmostEqual(conditional_ab_correlator(table, 0, 0), 1 / SQRT2, places=9)
        self.assertAlmostEqual(conditional_ab_correlator(table, 1, 1), -1 / SQRT2, places=9)
        self.assertAlmostEqual(i_bell(table), 2 * SQRT2, places=9)
        self.assertAlmostEqual(i_same(table), 2.0, places=9)
        self.assertAlmostEqual(c1_mean(table), 0.0, places=9)
        self.assertEqual(
            set(f_score(table).correlators),
            {"A0B0", "A0B1", "A1B0", "A1B1", "A0B2", "B2C0", "C1"},
        )

    def test_white_noise_closed_form(self):
        for n in (3, 4, 5):
            for p in (0.5, 0.9, 1.0):
                expected = 2 * SQRT2 * p + 4 * (n - 1) * (p - 1)
                self.assertAlmostEqual(white_noise_f(n, p), expected, places=9)

    def test_two_evaluation_paths_agree(self):
        for n, p in ((3, 1.0), (3, 0.8), (4, 0.95), (5, 0.9)):
            state = mix_white_noise(ghz_state(n), p)
            table = outcome_probabilities(state, n_party_layout(n), required_settings(n))
            self.assertAlmostEqual(f_from_state(state).f_value, n_party_f(table, n).f_value, places=9)

    def test_n_party_labels(self):
        table = outcome_probabilities(ghz_state(4), n_party_layout(4), required_settings(4))
        report = n_party_f(table, 4)
        self.assertIn("B2C[1]0", report.correlators)
        self.assertIn("C[1]0C[2]0", report.correlators)
        self.assertIn("C~1", report.correlators)
        self.assertAlmostEqual(report.f_value, 2 * SQRT2, delta=1e-9)

    def test_charlie_relabeling(self):
        for n in (4, 5):
            ghz = ghz_state(n).density_matrix()
            dephased = np.zeros_like(ghz)
            dephased[0, 0] = dephased[-1, -1] = 0.5
            noisy = 0.8 * ghz + 0.15 * dephased + 0.05 * np.eye(2 ** n) / 2 ** n
            state = QuantumState.from_density_matrix(noisy)
            reference = f_from_state(state).f_value
            axes = list(range(n))
            axes[2], axes[n - 1] = axes[n - 1], axes[2]
            tensor = noisy.reshape((2,) * (2 * n)).transpose(axes + [n + a for a in axes])
            swapped = QuantumState.from_density_matrix(tensor.reshape(2 ** n, 2 ** n))
            self.assertAlmostEqual(f_from_state(swapped).f_value, reference, places=9)
            table = outcome_probabilities(swapped, n_party_layout(n), required_settings(n))
            self.assertAlmostEqual(n_party_f(table, n).f_value, reference, places=9)

    def test_charlie_never_plus(self):
        # Charlie prepared in |-> always answers -1 to X
        minus = np.array([1.0, -1.0])
        state = product_state([[1, 0], [1, 0], minus])
        table = outcome_probabilities(state, ghz3_layout())
        with self.assertRaises(ConditioningError):
            f_score(table)

    def test_party_mismatch(self):
        table = outcome_probabilities(ghz_state(3), ghz3_layout())
        with self.assertRaises(LayoutError):
            n_party_f(table, 4)
        with self.assertRaises(DomainError):
            n_party_f(table, 2)

    def test_missing_row(self):
        table = outcome_probabilities(ghz_state(3), ghz3_layout(), [(0, 0, 1), (0, 1, 1), (1, 0, 1)])
        with self.assertRaises(LayoutError):
            f_score(table)

    def test_collective_charlie(self):
        self.assertEqual(collective_charlie([1, -1, -1]), 1)
        self.assertEqual(collective_charlie([-1]), -1)
        with self.assertRaises(DomainError):
            collective_charlie([])
        with self.assertRaises(DomainError):
            collective_charlie([0, 1])


class TestThresholds(unittest.TestCase):
    """Test visibility and fidelity thresholds"""

    def test_closed_forms(self):
        self.assertAlmostEqual(visibility_threshold(3), 5 / (4 + SQRT2), places=12)
        self.assertAlmostEqual(fidelity_threshold(3), 0.93306, delta=5e-5)
        self.assertGreater(fidelity_threshold(3), 0.93)
        for n in range(3, 9):
            p = visibility_threshold(n)
            self.assertAlmostEqual(fidelity_threshold(n), p + (1 - p) / 2 ** n, delta=1e-9)

    def test_monotone_in_n(self):
        rows = [threshold_result(n) for n in range(3, 9)]
        for lower, upper in zip(rows, rows[1:]):
            self.assertLess(lower.visibility_threshold, upper.visibility_threshold)
            self.assertLess(lower.fidelity_threshold, upper.fidelity_threshold)

    def test_bisection_matches_closed_form(self):
        for n in range(3, 9):
            self.assertAlmostEqual(visibility_threshold_numeric(n), visibility_threshold(n), delta=1e-6)

    def test_numeric_fidelity(self):
        self.assertAlmostEqual(fidelity_threshold_numeric(3), fidelity_threshold(3), delta=1e-6)
        result = threshold_result(4, numeric=True)
        self.assertAlmostEqual(result.visibility_numeric, result.visibility_threshold, delta=1e-6)

    def test_noisy_table_matches_density_matrix(self):
        for n, p in ((3, 0.93), (5, 0.7)):
            exact = outcome_probabilities(mix_white_noise(ghz_state(n), p), n_party_layout(n), required_settings(n))
            mixed = white_noise_table(n, p)
            for setting in exact.settings:
                np.testing.assert_allclose(mixed[setting], exact[setting], atol=1e-12)
        self.assertAlmostEqual(white_noise_fidelity(3, 0.93), 0.93 + 0.07 / 8, places=12)
        with self.assertRaises(DomainError):
            white_noise_table(3, 1.5)

    def test_bisection_at_qubit_cap(self):
        result = threshold_result(16, numeric=True)
        self.assertAlmostEqual(result.visibility_numeric, result.visibility_threshold, delta=1e-6)
        self.assertAlmostEqual(result.fidelity_numeric, result.fidelity_threshold, delta=1e-6)

    def test_small_n_rejected(self):
        with self.assertRaises(DomainError):
            visibility_threshold(2)


class TestClassicalBound(unittest.TestCase):
    """Test the brute-force deterministic bound"""

    def test_bound_is_two(self):
        result = classical_bound()
        self.assertEqual(result.evaluated, 128)
        self.assertEqual(result.undefined, 64)
        self.assertAlmostEqual(result.max_f, 2.0, places=12)
        self.assertGreater(len(result.maximizers), 0)

    def test_deterministic_table(self):
        strategy = ((1, 1), (1, 1, 1), (1, 1))
        report = f_score(deterministic_table(strategy))
        self.assertAlmostEqual(report.f_value, 2.0, places=12)


if __name__ == '__main__':
    unittest.main()
