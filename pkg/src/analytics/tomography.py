"""
Linear-inversion tomography of three qubits with projection onto physical states.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..datasets.tomography_io import PAULI_LETTERS, TOMOGRAPHY_QUBITS, TomographyDataset, tomography_settings
from ..quantum.measurement import I2, PAULI_X, PAULI_Y, PAULI_Z, outcome_signs
from ..quantum.states import QuantumState, fidelity_with_pure
from ..utils.batching import batch_sizes, map_batches, substream
from ..utils.errors import DimensionError, DomainError, InputError
from ..utils.logger import get_logger

logger = get_logger()

PAULI_MATRICES = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


@dataclass(frozen=True)
class ReconstructionResult:
    """Physical density matrix and its fidelity with the target state."""

    rho: QuantumState
    fidelity: float
    fidelity_sigma: float
    raw_min_eigenvalue: float
    mc_samples: int = 0
    seed: Optional[int] = None


def pauli_strings(n: int = TOMOGRAPHY_QUBITS) -> List[str]:
    return ["".join(letters) for letters in itertools.product("IXYZ", repeat=n)]


@lru_cache(maxsize=None)
def _estimator(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    (strings, settings) averaging weights and (strings, outcomes) signs.

    A string is estimated from every setting that agrees with it on its
    non-identity positions.
    """
    strings = pauli_strings(n)
    settings = tomography_settings(n)
    signs = outcome_signs(n)
    averaging = np.zeros((len(strings), len(settings)))
    parity = np.ones((len(strings), 2 ** n))
    for s, string in enumerate(strings):
        active = [k for k, letter in enumerate(string) if letter != "I"]
        for r, setting in enumerate(settings):
            if all(setting[k] == string[k] for k in active):
                averaging[s, r] = 1.0
        averaging[s] /= averaging[s].sum()
        if active:
            parity[s] = signs[:, active].prod(axis=1)
    averaging.setflags(write=False)
    parity.setflags(write=False)
    return averaging, parity


@lru_cache(maxsize=None)
def _pauli_basis(n: int) -> np.ndarray:
    """(4^n, 2^n, 2^n) tensor products in pauli_strings order."""
    basis = []
    for string in pauli_strings(n):
        matrix = np.ones((1, 1), dtype=complex)
        for letter in string:
            matrix = np.kron(matrix, PAULI_MATRICES[letter])
        basis.append(matrix)
    basis = np.array(basis)
    basis.setflags(write=False)
    return basis


def _expectation_batch(frequencies: np.ndarray, n: int) -> np.ndarray:
    """(batch, 27, 8) frequencies to (batch, 64) expectation values."""
    averaging, parity = _estimator(n)
    return np.einsum("sr,brk,sk->bs", averaging, frequencies, parity)


def pauli_expectations(data: TomographyDataset) -> Dict[str, float]:
    """All 64 Pauli-string expectations; identity positions are marginalised."""
    n = data.n_qubits
    values = _expectation_batch(data.frequencies()[np.newaxis], n)[0]
    expectations = dict(zip(pauli_strings(n), values.tolist()))
    expectations["I" * n] = 1.0
    return expectations


def _inversion_batch(expectations: np.ndarray, n: int) -> np.ndarray:
    rho = np.einsum("bs,sij->bij", expectations, _pauli_basis(n)) / 2 ** n
    return (rho + np.conj(np.swapaxes(rho, 1, 2))) / 2


def linear_inversion(expectations: Mapping[str, float]) -> np.ndarray:
    """rho = 2^-n sum_s <s> s over all Pauli strings s."""
    n = TOMOGRAPHY_QUBITS
    strings = pauli_strings(n)
    missing = [s for s in strings if s not in expectations]
    if missing:
        raise InputError(f"linear inversion needs all {len(strings)} expectations, missing {', '.join(missing[:4])}")
    values = np.array([[expectations[s] for s in strings]], dtype=float)
    return _inversion_batch(values, n)[0]


def _truncate_spectrum(eigenvalues: np.ndarray) -> np.ndarray:
    """Zero the negative tail of a unit-sum spectrum and spread its weight over the rest."""
    order = np.argsort(eigenvalues)[::-1]
    values = eigenvalues[order].astype(float).copy()
    deficit = 0.0
    kept = len(values)
    while kept > 0 and values[kept - 1] + deficit / kept < 0:
        deficit += values[kept - 1]
        values[kept - 1] = 0.0
        kept -= 1
    values[:kept] += deficit / kept
    result = np.empty_like(values)
    result[order] = values
    return result


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > Config.EIGEN_TOLERANCE:
        raise DimensionError("matrix is not Hermitian")
    if abs(np.trace(h).real - 1.0) > Config.PROBABILITY_TOLERANCE:
        raise DomainError(f"matrix trace is {np.trace(h).real!r}, expected 1")
    return (h + h.conj().T) / 2


def project_to_physical(h: np.ndarray) -> QuantumState:
    """
    Closest density matrix in Frobenius norm to a unit-trace Hermitian matrix.

    Eigenvalues below zero are removed from the smallest up, their total
    subtracted evenly from the eigenvalues that remain.
    """
    h = _check_hermitian(h)
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    if eigenvalues.min() >= 0:
        return QuantumState.from_density_matrix(h / np.trace(h).real)
    projected = _truncate_spectrum(eigenvalues)
    rho = (eigenvectors * projected) @ eigenvectors.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState.from_density_matrix(rho / np.trace(rho).real)


def point_estimate(data: TomographyDataset) -> Tuple[QuantumState, float]:
    """(physical state, smallest eigenvalue before projection)."""
    raw = linear_inversion(pauli_expectations(data))
    raw_min = float(np.linalg.eigvalsh(raw).min())
    if raw_min < 0:
        logger.debug(f"point_estimate: raw reconstruction has eigenvalue {raw_min:.3e}, projecting")
    return project_to_physical(raw), raw_min


def resample_rows(counts: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """(size, rows, outcomes) multinomial redraws at the observed frequencies."""
    totals = counts.sum(axis=1).astype(np.int64)
    frequencies = counts / counts.sum(axis=1, keepdims=True)
    return np.stack(
        [rng.multinomial(total, row, size=size) for total, row in zip(totals, frequencies)],
        axis=1,
    ).astype(float)


def _fidelity_batch(counts: np.ndarray, target: np.ndarray, n: int) -> np.ndarray:
    frequencies = counts / counts.sum(axis=2, keepdims=True)
    raw = _inversion_batch(_expectation_batch(frequencies, n), n)
    eigenvalues, eigenvectors = np.linalg.eigh(raw)
    spectra = np.array([
        values if values.min() >= 0 else _truncate_spectrum(values) for values in eigenvalues
    ])
    overlaps = np.abs(np.einsum("i,bij->bj", target.conj(), eigenvectors)) ** 2
    fidelities = (overlaps * spectra).sum(axis=1) / spectra.sum(axis=1)
    return np.clip(fidelities, 0.0, 1.0)


def reconstruct(
    data: TomographyDataset,
    target: QuantumState,
    mc_samples: int = 100,
    seed: int = Config.DEFAULT_SEED,
    workers: Optional[int] = None,
) -> ReconstructionResult:
    """
    Reconstruct the state and bound its fidelity by Monte Carlo.

    Args:
        data: Integer counts for all 27 settings
        target: Pure reference state
        mc_samples: Multinomial redraws of the dataset (>= Config.MIN_MC_SAMPLES)
        seed: Root seed; batch b uses substream (seed, b)
        workers: Thread count

    Returns:
        ReconstructionResult
    """
    if not isinstance(mc_samples, (int, np.integer)) or mc_samples < Config.MIN_MC_SAMPLES:
        raise DomainError(f"mc_samples must be an integer >= {Config.MIN_MC_SAMPLES}, got {mc_samples}")
    if not data.is_integral:
        raise InputError("Monte Carlo resampling needs integer counts")
    if not target.is_pure or target.n_parties != data.n_qubits:
        raise DimensionError(f"target must be a pure {data.n_qubits}-qubit state")

    rho, raw_min = point_estimate(data)
    fidelity = fidelity_with_pure(rho, target)
    counts = data.matrix()
    n = data.n_qubits

    def run_batch(index: int, size: int) -> np.ndarray:
        return _fidelity_batch(resample_rows(counts, size, substream(seed, index)), target.vector, n)

    samples = np.concatenate(
        map_batches(run_batch, batch_sizes(mc_samples, Config.BOOTSTRAP_BATCH), workers, "tomography_")
    )
    sigma = float(np.std(samples, ddof=1))
    logger.info(f"reconstruct: fidelity={fidelity:.4f} +/- {sigma:.4f} over {mc_samples} samples")
    return ReconstructionResult(
        rho=rho,
        fidelity=fidelity,
        fidelity_sigma=sigma,
        raw_min_eigenvalue=raw_min,
        mc_samples=int(mc_samples),
        seed=int(seed),
    )


def setting_index(setting: str) -> int:
    """Row of a Pauli setting in dataset order."""
    return sum(PAULI_LETTERS.index(letter) * 3 ** (len(setting) - 1 - k) for k, letter in enumerate(setting))
