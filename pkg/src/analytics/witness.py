"""
GHZ3 fidelity witness from five local measurement settings.

|GHZ3><GHZ3| = 1/2 (|HHH><HHH| + |VVV><VVV|) + 1/8 (XXX - XYY - YXY - YYX)
"""

from dataclasses import dataclass
from functools import reduce
from typing import Dict, Mapping, Optional

import numpy as np

from ..config.settings import Config
from ..datasets.tomography_io import TomographyDataset
from ..quantum.measurement import PAULI_X, PAULI_Y, X, Y, expectation, outcome_signs
from ..quantum.states import QuantumState
from ..utils.batching import batch_sizes, map_batches, substream
from ..utils.errors import DimensionError, DomainError, InputError
from ..utils.logger import get_logger
from .tomography import resample_rows, setting_index

logger = get_logger()

POPULATION_TERMS = ("HHH", "VVV")
CORRELATION_TERMS = {"XXX": 1.0, "XYY": -1.0, "YXY": -1.0, "YYX": -1.0}
WITNESS_SETTINGS = ("ZZZ",) + tuple(CORRELATION_TERMS)


@dataclass(frozen=True)
class WitnessReport:
    """Witnessed GHZ3 fidelity and its Monte Carlo spread."""

    fidelity: float
    sigma: float
    expectations: Dict[str, float]
    mc_samples: int = 0
    seed: Optional[int] = None


def ghz3_witness_operator() -> np.ndarray:
    """8x8 stabilizer expansion of the GHZ3 projector."""
    paulis = {"X": PAULI_X, "Y": PAULI_Y}
    witness = np.zeros((8, 8), dtype=complex)
    witness[0, 0] = witness[7, 7] = 0.5
    for string, sign in CORRELATION_TERMS.items():
        witness += sign / 8 * reduce(np.kron, [paulis[letter] for letter in string])
    return witness


def witness_fidelity(expectations: Mapping[str, float]) -> float:
    """
    1/2 (P_HHH + P_VVV) + 1/8 (<XXX> - <XYY> - <YXY> - <YYX>).

    Args:
        expectations: HHH and VVV populations plus the four correlators

    Returns:
        Witnessed fidelity
    """
    missing = [term for term in POPULATION_TERMS + tuple(CORRELATION_TERMS) if term not in expectations]
    if missing:
        raise InputError(f"witness needs values for {', '.join(missing)}")
    for term in POPULATION_TERMS:
        if not 0.0 <= expectations[term] <= 1.0:
            raise DomainError(f"population {term} must lie in [0, 1], got {expectations[term]}")
    for term in CORRELATION_TERMS:
        if not -1.0 <= expectations[term] <= 1.0:
            raise DomainError(f"correlator {term} must lie in [-1, 1], got {expectations[term]}")
    populations = sum(expectations[term] for term in POPULATION_TERMS)
    correlations = sum(sign * expectations[term] for term, sign in CORRELATION_TERMS.items())
    return 0.5 * populations + correlations / 8


def witness_expectations(state: QuantumState) -> Dict[str, float]:
    """Exact witness inputs of a three-qubit state."""
    if state.n_parties != 3:
        raise DimensionError(f"the GHZ3 witness needs three qubits, got {state.n_parties}")
    diagonal = np.real(np.diagonal(state.density_matrix()))
    values = {"HHH": float(diagonal[0]), "VVV": float(diagonal[7])}
    observables = {"X": X, "Y": Y}
    for string in CORRELATION_TERMS:
        values[string] = expectation(state, [observables[letter] for letter in string])
    return values


def _expectations_batch(counts: np.ndarray) -> Dict[str, np.ndarray]:
    """(batch, 5, 8) counts of the witness settings to per-term arrays."""
    frequencies = counts / counts.sum(axis=2, keepdims=True)
    parity = outcome_signs(3).prod(axis=1)
    values = {"HHH": frequencies[:, 0, 0], "VVV": frequencies[:, 0, 7]}
    for column, string in enumerate(CORRELATION_TERMS, start=1):
        values[string] = frequencies[:, column, :] @ parity
    return values


def _fidelity_batch(values: Dict[str, np.ndarray]) -> np.ndarray:
    populations = values["HHH"] + values["VVV"]
    correlations = sum(sign * values[term] for term, sign in CORRELATION_TERMS.items())
    return 0.5 * populations + correlations / 8


def witness_from_dataset(
    dataset: TomographyDataset,
    mc_samples: int = 100,
    seed: int = Config.DEFAULT_SEED,
    workers: Optional[int] = None,
) -> WitnessReport:
    """Witness fidelity from the ZZZ, XXX, XYY, YXY and YYX rows of a dataset."""
    if not isinstance(mc_samples, (int, np.integer)) or mc_samples < Config.MIN_MC_SAMPLES:
        raise DomainError(f"mc_samples must be an integer >= {Config.MIN_MC_SAMPLES}, got {mc_samples}")
    if not dataset.is_integral:
        raise InputError("Monte Carlo resampling needs integer counts")
    counts = dataset.matrix()[[setting_index(s) for s in WITNESS_SETTINGS]]
    point = {k: float(v[0]) for k, v in _expectations_batch(counts[np.newaxis]).items()}
    fidelity = witness_fidelity(point)

    def run_batch(index: int, size: int) -> np.ndarray:
        return _fidelity_batch(_expectations_batch(resample_rows(counts, size, substream(seed, index))))

    samples = np.concatenate(
        map_batches(run_batch, batch_sizes(mc_samples, Config.BOOTSTRAP_BATCH), workers, "witness_")
    )
    sigma = float(np.std(samples, ddof=1))
    logger.info(f"witness_from_dataset: fidelity={fidelity:.4f} +/- {sigma:.4f}")
    return WitnessReport(fidelity=fidelity, sigma=sigma, expectations=point, mc_samples=int(mc_samples), seed=int(seed))
