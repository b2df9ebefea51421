"""
Tests for qubit states and measurement tables
"""

import sys
import os
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.quantum.measurement import (
    STANDARD_OBSERVABLES,
    X,
    Z,
    Z_MINUS_X,
    Z_PLUS_X,
    DichotomicObservable,
    MeasurementLayout,
    ProbabilityTable,
    expectation,
    ghz3_layout,
    n_party_layout,
    outcome_labels,
    outcome_probabilities,
    required_settings,
)
from src.quantum.states import (
    QuantumState,
    fidelity_with_pure,
    ghz_state,
    mix_white_noise,
    product_state,
    project_party,
)
from src.utils.errors import ConditioningError, DimensionError, DomainError, LayoutError, UnsupportedError


class TestStates(unittest.TestCase):
    """Test state construction"""

    def test_ghz_vector(self):
        state = ghz_state(3)
        self.assertTrue(state.is_pure)
        self.assertAlmostEqual(abs(state.vector[0]) ** 2, 0.5, places=12)
        self.assertAlmostEqual(abs(state.vector[7]) ** 2, 0.5, places=12)
        self.assertAlmostEqual(float(np.linalg.norm(state.vector)), 1.0, places=12)

    def test_invalid_states(self):
        with self.assertRaises(DimensionError):
            QuantumState(n_parties=2, vector=np.array([1.0, 1.0, 0.0, 0.0]))
        with self.assertRaises(DimensionError):
            QuantumState.from_vector(np.ones(3) / np.sqrt(3))
        with self.assertRaises(DimensionError):
            QuantumState.from_density_matrix(np.diag([1.5, -0.5]))
        with self.assertRaises(DimensionError):
            ghz_state(1)

    def test_white_noise(self):
        target = ghz_state(3)
        for p in (0.0, 0.3, 0.93, 1.0):
            noisy = mix_white_noise(target, p)
            self.assertFalse(noisy.is_pure)
            self.assertAlmostEqual(fidelity_with_pure(noisy, target), p + (1 - p) / 8, places=12)
        with self.assertRaises(DomainError):
            mix_white_noise(target, 1.2)

    def test_fidelity_needs_pure_target(self):
        noisy = mix_white_noise(ghz_state(3), 0.5)
        with self.assertRaises(UnsupportedError):
            fidelity_with_pure(ghz_state(3), noisy)

    def test_product_state(self):
        state = product_state([[1, 0], [1, 1], [0, 1]])
        self.assertEqual(state.n_parties, 3)
        self.assertAlmostEqual(abs(state.vector[0b001]) ** 2, 0.5, places=12)
        self.assertAlmostEqual(abs(state.vector[0b011]) ** 2, 0.5, places=12)

    def test_project_party(self):
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        conditioned, probability = project_party(ghz_state(4), 3, plus)
        self.assertAlmostEqual(probability, 0.5, places=12)
        self.assertAlmostEqual(fidelity_with_pure(conditioned, ghz_state(3)), 1.0, places=12)

        noisy, probability = project_party(mix_white_noise(ghz_state(4), 0.8), 3, plus)
        self.assertAlmostEqual(probability, 0.5, places=12)
        self.assertEqual(noisy.n_parties, 3)

        with self.assertRaises(ConditioningError):
            project_party(product_state([[1, 0], [1, 0]]), 1, [0, 1])


class TestMeasurement(unittest.TestCase):
    """Test observables, layouts and Born-rule tables"""

    def test_observables_are_dichotomic(self):
        for observable in (Z, X, Z_PLUS_X, Z_MINUS_X):
            eigenvalues = np.linalg.eigvalsh(observable.matrix)
            np.testing.assert_allclose(eigenvalues, [-1, 1], atol=1e-12)
        with self.assertRaises(DomainError):
            DichotomicObservable(np.diag([1.0, 0.0]), "bad")

    def test_projectors_resolve_identity(self):
        rng = np.random.default_rng(11)
        direction = rng.normal(size=3)
        z, x, y = direction / np.linalg.norm(direction)
        observables = [*STANDARD_OBSERVABLES.values(), DichotomicObservable.from_bloch(z, x, y, "random")]
        for observable in observables:
            plus, minus = observable.projectors
            np.testing.assert_allclose(plus + minus, np.eye(2), atol=1e-12)
            np.testing.assert_allclose(plus @ minus, np.zeros((2, 2)), atol=1e-12)
            np.testing.assert_allclose(plus @ plus, plus, atol=1e-12)
            np.testing.assert_allclose(plus - minus, observable.matrix, atol=1e-12)

    def test_outcome_order(self):
        self.assertEqual(outcome_labels(3), ["+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"])

    def test_layouts(self):
        self.assertEqual(ghz3_layout().alphabet_sizes, (2, 3, 2))
        self.assertEqual(len(ghz3_layout().settings()), 12)
        self.assertEqual(n_party_layout(5).alphabet_sizes, (2, 3, 2, 2, 2))
        self.assertEqual(required_settings(4), [
            (0, 0, 1, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1), (0, 2, 0, 0),
        ])
        with self.assertRaises(LayoutError):
            MeasurementLayout(((Z,), ()))

    def test_ghz_table(self):
        table = outcome_probabilities(ghz_state(3), ghz3_layout())
        np.testing.assert_allclose(table[(0, 2, 0)], [0.5, 0, 0, 0, 0, 0, 0, 0.5], atol=1e-12)
        self.assertAlmostEqual(table.correlator((1, 0, 1), (0, 1, 2)), 1 / np.sqrt(2), places=12)
        self.assertTrue(table.is_non_signaling())

    def test_expectation_matches_table(self):
        state = mix_white_noise(ghz_state(3), 0.7)
        table = outcome_probabilities(state, ghz3_layout())
        value = expectation(state, [X, Z_MINUS_X, X])
        self.assertAlmostEqual(value, table.correlator((1, 1, 1), (0, 1, 2)), places=12)
        self.assertAlmostEqual(expectation(state, [Z, None, Z]), 0.7, places=12)
        with self.assertRaises(DimensionError):
            expectation(state, [Z, Z])

    def test_signaling_detected(self):
        table = ProbabilityTable(n_parties=2, distributions={
            (0, 0): [1, 0, 0, 0],
            (0, 1): [0, 0, 1, 0],
        })
        self.assertAlmostEqual(table.max_signaling_deviation(), 1.0)
        self.assertFalse(table.is_non_signaling())

    def test_table_validation(self):
        with self.assertRaises(DomainError):
            ProbabilityTable(n_parties=1, distributions={(0,): [0.7, 0.7]})
        with self.assertRaises(LayoutError):
            ProbabilityTable(n_parties=2, distributions={(0,): [1, 0, 0, 0]})
        with self.assertRaises(LayoutError):
            ProbabilityTable(n_parties=1, distributions={(0,): [1, 0]}, weights={(1,): 5})


if __name__ == '__main__':
    unittest.main()
