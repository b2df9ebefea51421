"""
Tests for three-qubit tomography and the GHZ3 fidelity witness
"""

import sys
import os
import io
import unittest

import numpy as np
from scipy import optimize

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.analytics.tomography import (
    linear_inversion,
    pauli_expectations,
    pauli_strings,
    project_to_physical,
    reconstruct,
)
from src.analytics.witness import (
    ghz3_witness_operator,
    witness_expectations,
    witness_fidelity,
    witness_from_dataset,
)
from src.datasets.tomography_io import (
    exact_tomography,
    load_tomography,
    simulate_tomography,
    tomography_settings,
    write_tomography,
)
from src.quantum.states import QuantumState, ghz_state, mix_white_noise, product_state
from src.utils.errors import DimensionError, DomainError, InputError, LayoutError


def _state_library():
    rng = np.random.default_rng(7)
    random_vector = rng.normal(size=8) + 1j * rng.normal(size=8)
    w_vector = np.zeros(8)
    w_vector[[1, 2, 4]] = 1 / np.sqrt(3)
    return [
        ghz_state(3),
        product_state([[1, 0], [1, 0], [1, 0]]),
        product_state([[1, 1], [1, 1j], [0, 1]]),
        QuantumState.from_vector(w_vector),
        QuantumState.from_vector(random_vector / np.linalg.norm(random_vector)),
        mix_white_noise(ghz_state(3), 0.7),
    ]


def _oracle_spectrum(eigenvalues):
    """Simplex projection of a spectrum by root-finding the shift."""
    def excess(shift):
        return np.maximum(eigenvalues - shift, 0).sum() - 1.0

    shift = optimize.brentq(excess, eigenvalues.min() - 1.0, eigenvalues.max())
    return np.maximum(eigenvalues - shift, 0)


class TestLinearInversion(unittest.TestCase):
    """Test reconstruction from exact data"""

    def test_round_trip_on_library(self):
        for state in _state_library():
            rho = linear_inversion(pauli_expectations(exact_tomography(state)))
            np.testing.assert_allclose(rho, state.density_matrix(), atol=1e-10)

    def test_expectations_cover_all_strings(self):
        expectations = pauli_expectations(exact_tomography(ghz_state(3)))
        self.assertEqual(len(expectations), 64)
        self.assertEqual(expectations["III"], 1.0)
        self.assertAlmostEqual(expectations["XXX"], 1.0, places=12)
        self.assertAlmostEqual(expectations["ZZI"], 1.0, places=12)
        self.assertAlmostEqual(expectations["ZII"], 0.0, places=12)

    def test_missing_expectation(self):
        expectations = dict.fromkeys(pauli_strings(), 0.0)
        del expectations["XYZ"]
        with self.assertRaises(InputError):
            linear_inversion(expectations)


class TestProjection(unittest.TestCase):
    """Test projection onto density matrices"""

    def test_matches_root_finding_oracle(self):
        rng = np.random.default_rng(5)
        eigenvalues = np.array([0.6, 0.5, 0.2, 0.1, -0.1, -0.15, -0.05, -0.1])
        unitary, _ = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))
        h = unitary @ np.diag(eigenvalues) @ unitary.conj().T
        projected = project_to_physical(h).density_matrix()
        spectrum = np.sort(np.linalg.eigvalsh(projected))
        np.testing.assert_allclose(spectrum, np.sort(_oracle_spectrum(eigenvalues)), atol=1e-10)
        self.assertAlmostEqual(np.trace(projected).real, 1.0, places=12)

    def test_full_matrix_oracle_on_small_systems(self):
        rng = np.random.default_rng(17)
        for dim in (2, 4, 2, 4, 4):
            m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            h = (m + m.conj().T) / 2
            h += (1.0 - np.trace(h).real) / dim * np.eye(dim)
            eigenvalues, eigenvectors = np.linalg.eigh(h)
            expected = (eigenvectors * _oracle_spectrum(eigenvalues)) @ eigenvectors.conj().T
            np.testing.assert_allclose(project_to_physical(h).density_matrix(), expected, atol=1e-10)

    def test_clips_single_qubit_diagonal(self):
        projected = project_to_physical(np.diag([1.1, -0.1])).density_matrix()
        np.testing.assert_allclose(projected, np.diag([1.0, 0.0]), atol=1e-12)

    def test_physical_input_unchanged(self):
        rho = mix_white_noise(ghz_state(3), 0.5).density_matrix()
        np.testing.assert_allclose(project_to_physical(rho).density_matrix(), rho, atol=1e-12)

    def test_invalid_input(self):
        with self.assertRaises(DimensionError):
            project_to_physical(np.array([[1, 1], [0, 0]]))
        with self.assertRaises(DomainError):
            project_to_physical(np.eye(2))


class TestReconstruction(unittest.TestCase):
    """Test reconstruction from sampled counts"""

    def test_ideal_ghz(self):
        data = simulate_tomography(ghz_state(3), 10_000, seed=1)
        result = reconstruct(data, ghz_state(3), mc_samples=100, seed=1)
        self.assertGreaterEqual(result.fidelity, 0.99)
        self.assertTrue(0 < result.fidelity_sigma < 0.01)
        self.assertEqual(result.mc_samples, 100)

    def test_noisy_ghz(self):
        data = simulate_tomography(mix_white_noise(ghz_state(3), 0.93), 10_000, seed=2)
        result = reconstruct(data, ghz_state(3), mc_samples=100, seed=2)
        self.assertAlmostEqual(result.fidelity, 0.93 + 0.07 / 8, delta=0.01)
        self.assertGreater(result.fidelity, 0.92)

    def test_sigma_shrinks_with_shots(self):
        state = mix_white_noise(ghz_state(3), 0.5)
        sigmas = []
        for shots in (2_000, 200_000):
            data = simulate_tomography(state, shots, seed=6)
            sigmas.append(reconstruct(data, ghz_state(3), mc_samples=200, seed=6).fidelity_sigma)
        # 100x the shots, so about a tenth of the spread
        self.assertTrue(6.0 < sigmas[0] / sigmas[1] < 16.0, sigmas)

    def test_reproducible(self):
        data = simulate_tomography(ghz_state(3), 2_000, seed=3)
        first = reconstruct(data, ghz_state(3), mc_samples=60, seed=9)
        second = reconstruct(data, ghz_state(3), mc_samples=60, seed=9, workers=1)
        self.assertEqual(first.fidelity_sigma, second.fidelity_sigma)

    def test_invalid_requests(self):
        data = simulate_tomography(ghz_state(3), 100, seed=4)
        with self.assertRaises(DomainError):
            reconstruct(data, ghz_state(3), mc_samples=10)
        with self.assertRaises(InputError):
            reconstruct(exact_tomography(ghz_state(3)), ghz_state(3), mc_samples=50)
        with self.assertRaises(DimensionError):
            reconstruct(data, mix_white_noise(ghz_state(3), 0.9), mc_samples=50)


class TestTomographyFiles(unittest.TestCase):
    """Test tomography CSV files"""

    def test_write_and_load(self):
        data = simulate_tomography(ghz_state(3), 500, seed=6)
        text = write_tomography(data, io.StringIO())
        loaded = load_tomography(text.encode("utf-8"))
        np.testing.assert_array_equal(loaded.matrix(), data.matrix())
        self.assertEqual(list(loaded.rows), tomography_settings())

    def test_missing_setting(self):
        text = write_tomography(simulate_tomography(ghz_state(3), 10, seed=6))
        truncated = "\n".join(line for line in text.splitlines() if not line.startswith("YYY"))
        with self.assertRaises(LayoutError):
            load_tomography(truncated.encode("utf-8"))


class TestWitness(unittest.TestCase):
    """Test the stabilizer witness"""

    def test_operator_equals_projector(self):
        vector = ghz_state(3).vector
        np.testing.assert_allclose(ghz3_witness_operator(), np.outer(vector, vector.conj()), atol=1e-12)

    def test_white_noise_grid(self):
        for p in np.linspace(0, 1, 11):
            values = witness_expectations(mix_white_noise(ghz_state(3), p))
            self.assertAlmostEqual(witness_fidelity(values), p + (1 - p) / 8, delta=1e-10)

    def test_invalid_inputs(self):
        values = witness_expectations(ghz_state(3))
        with self.assertRaises(InputError):
            witness_fidelity({k: v for k, v in values.items() if k != "YYX"})
        with self.assertRaises(DomainError):
            witness_fidelity({**values, "HHH": 1.2})
        with self.assertRaises(DomainError):
            witness_fidelity({**values, "XYY": -1.5})
        with self.assertRaises(DimensionError):
            witness_expectations(ghz_state(4))

    def test_from_dataset(self):
        data = simulate_tomography(mix_white_noise(ghz_state(3), 0.93), 20_000, seed=8)
        report = witness_from_dataset(data, mc_samples=100, seed=8)
        self.assertAlmostEqual(report.fidelity, 0.93 + 0.07 / 8, delta=0.01)
        self.assertTrue(0 < report.sigma < 0.01)
        self.assertEqual(report.seed, 8)


if __name__ == '__main__':
    unittest.main()
