"""
Tests for the Jones-calculus modulator model
"""

import sys
import os
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.analytics.inequality import f_score
from src.optics.jones import (
    SPPM_SETTINGS,
    JonesMatrix,
    SppmSetting,
    basis_choice_fidelity,
    chain_matrix,
    effective_observable,
    eopm,
    hwp,
    observable_for_chain,
    qwp,
    sppm,
    sppm_layout,
)
from src.quantum.measurement import STANDARD_OBSERVABLES, outcome_probabilities
from src.quantum.states import ghz_state
from src.utils.errors import DomainError


class TestJonesElements(unittest.TestCase):
    """Test wave plates and the phase stage"""

    def test_elements_are_unitary(self):
        for element in (qwp(0.3), hwp(-1.1), eopm(2.0), sppm(0.7)):
            product = element.matrix.conj().T @ element.matrix
            np.testing.assert_allclose(product, np.eye(2), atol=1e-12)

    def test_non_unitary_rejected(self):
        with self.assertRaises(DomainError):
            JonesMatrix(np.array([[1, 0], [0, 0.5]]))
        with self.assertRaises(DomainError):
            qwp(float("nan"))

    def test_two_quarter_plates_make_half_plate(self):
        self.assertTrue((qwp(0.4) @ qwp(0.4)).equals_up_to_phase(hwp(0.4)))

    def test_reference_matrices(self):
        cases = [
            (qwp(0.0), np.diag([1.0, 1j])),
            (qwp(np.pi / 2), np.diag([1j, 1.0])),
            (eopm(np.pi), np.diag([1.0, -1.0])),
            (hwp(0.0), np.diag([1.0, -1.0])),
        ]
        for element, expected in cases:
            self.assertTrue(element.equals_up_to_phase(JonesMatrix(expected)), element.label)
        self.assertFalse(qwp(0.0).equals_up_to_phase(JonesMatrix(np.diag([1j, 1.0]))))

    def test_chain_matches_closed_form(self):
        for phi in np.linspace(-np.pi, np.pi, 13):
            chain = chain_matrix(SppmSetting(phase=phi))
            np.testing.assert_allclose(chain.matrix, sppm(phi).matrix, atol=1e-12)

    def test_observable_is_rotation_in_zx_plane(self):
        for phi in np.linspace(-np.pi, np.pi, 9):
            observable = effective_observable(SppmSetting(phase=phi))
            expected = np.array([[np.cos(phi), np.sin(phi)], [np.sin(phi), -np.cos(phi)]])
            np.testing.assert_allclose(observable.matrix, expected, atol=1e-12)

    def test_observable_ignores_global_phase(self):
        for phi in (-2.0, 0.0, np.pi / 4, 1.3):
            chain = chain_matrix(SppmSetting(phase=phi, qwp1_angle=0.2, qwp2_angle=-0.7))
            reference = observable_for_chain(chain).matrix
            for alpha in (0.5, np.pi, -2.4):
                shifted = JonesMatrix(np.exp(1j * alpha) * chain.matrix)
                np.testing.assert_allclose(observable_for_chain(shifted).matrix, reference, atol=1e-12)


class TestSppmSettings(unittest.TestCase):
    """Test the phase settings of the three observers"""

    def test_settings_reproduce_observables(self):
        for observer, rows in SPPM_SETTINGS.items():
            for _, phase, label, _ in rows:
                observable = effective_observable(SppmSetting(phase=phase))
                self.assertEqual(observable.label, label, observer)
                np.testing.assert_allclose(observable.matrix, STANDARD_OBSERVABLES[label].matrix, atol=1e-9)

    def test_layout_reaches_quantum_maximum(self):
        table = outcome_probabilities(ghz_state(3), sppm_layout())
        self.assertAlmostEqual(f_score(table).f_value, 2 * np.sqrt(2), delta=1e-9)

    def test_reported_fidelities_in_range(self):
        for rows in SPPM_SETTINGS.values():
            for _, _, _, fidelity in rows:
                self.assertTrue(0.98 < fidelity < 1.0)


class TestBasisChoiceFidelity(unittest.TestCase):
    """Test F_m from counts"""

    def test_ratio(self):
        self.assertAlmostEqual(basis_choice_fidelity(9923, 77), 0.9923)
        self.assertEqual(basis_choice_fidelity(5, 0), 1.0)

    def test_invalid_counts(self):
        for right, wrong in ((0, 0), (-1, 3), (2.5, 1)):
            with self.assertRaises(DomainError):
                basis_choice_fidelity(right, wrong)


if __name__ == '__main__':
    unittest.main()
