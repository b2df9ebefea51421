"""
Three-qubit Pauli tomography datasets.

Same CSV shape as the counts format, with the setting spelled as the Pauli
basis of each qubit (``XYZ`` means X on Alice, Y on Bob, Z on Charlie).
"""

import itertools
import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, TextIO

import numpy as np
import pandas as pd

from ..quantum.measurement import X, Y, Z, MeasurementLayout, outcome_probabilities
from ..quantum.states import QuantumState
from ..utils.errors import DimensionError, LayoutError, NormalizationError
from ..utils.logger import get_logger
from .counts import Source, outcome_columns, read_count_rows

logger = get_logger()

PAULI_LETTERS = "XYZ"
TOMOGRAPHY_QUBITS = 3


def tomography_settings(n: int = TOMOGRAPHY_QUBITS) -> List[str]:
    """All 3^n Pauli settings in XYZ-lexicographic order."""
    return ["".join(letters) for letters in itertools.product(PAULI_LETTERS, repeat=n)]


def pauli_layout(n: int = TOMOGRAPHY_QUBITS) -> MeasurementLayout:
    """Every qubit measured in X, Y or Z (input 0, 1, 2)."""
    return MeasurementLayout(((X, Y, Z),) * n)


def _pauli_setting(value: str, n: int) -> str:
    value = value.upper()
    if not re.fullmatch(f"[{PAULI_LETTERS}]{{{n}}}", value):
        raise ValueError(f"setting {value!r} must be {n} letters from {PAULI_LETTERS}")
    return value


@dataclass(frozen=True, eq=False)
class TomographyDataset:
    """
    Outcome counts for every Pauli setting of three qubits.

    Exact datasets built from a state hold probabilities instead of integer
    counts; they evaluate the same way but cannot be resampled.
    """

    rows: Mapping[str, np.ndarray]

    def __post_init__(self):
        n = TOMOGRAPHY_QUBITS
        expected = set(tomography_settings(n))
        rows: Dict[str, np.ndarray] = {}
        for key, values in self.rows.items():
            key = key.upper()
            if key not in expected:
                raise LayoutError(f"unknown tomography setting {key!r}")
            values = np.array(values, dtype=float).reshape(-1)
            if values.shape != (2 ** n,):
                raise LayoutError(f"setting {key} needs {2 ** n} counts, got {values.shape[0]}")
            if (values < 0).any():
                raise LayoutError(f"setting {key} has negative counts")
            if values.sum() <= 0:
                raise NormalizationError(f"setting {key} has no counts")
            values.setflags(write=False)
            rows[key] = values
        missing = sorted(expected - set(rows))
        if missing:
            raise LayoutError(f"tomography needs all {len(expected)} settings, missing {', '.join(missing)}")
        object.__setattr__(self, "rows", {key: rows[key] for key in tomography_settings(n)})

    @property
    def n_qubits(self) -> int:
        return TOMOGRAPHY_QUBITS

    @property
    def is_integral(self) -> bool:
        return all(np.array_equal(row, np.round(row)) and row.sum() >= 1 for row in self.rows.values())

    def matrix(self) -> np.ndarray:
        """(27, 8) counts in setting order."""
        return np.array(list(self.rows.values()))

    def frequencies(self) -> np.ndarray:
        counts = self.matrix()
        return counts / counts.sum(axis=1, keepdims=True)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.matrix(), index=list(self.rows), columns=outcome_columns(self.n_qubits))
        frame.index.name = "setting"
        return frame


def load_tomography(source: Source) -> TomographyDataset:
    """Load a tomography CSV; ParseError on malformed rows."""
    n, rows = read_count_rows(source, _pauli_setting)
    if n != TOMOGRAPHY_QUBITS:
        raise DimensionError(f"tomography supports {TOMOGRAPHY_QUBITS} qubits, file has {n}")
    dataset = TomographyDataset(rows)
    logger.info(f"load_tomography: {len(rows)} settings, {int(dataset.matrix().sum())} events")
    return dataset


def write_tomography(dataset: TomographyDataset, stream: Optional[TextIO] = None) -> str:
    frame = dataset.to_frame()
    if dataset.is_integral:
        frame = frame.astype(np.int64)
    text = frame.reset_index().to_csv(index=False, lineterminator="\n")
    if stream is not None:
        stream.write(text)
    return text


def _pauli_probabilities(state: QuantumState) -> Dict[str, np.ndarray]:
    if state.n_parties != TOMOGRAPHY_QUBITS:
        raise DimensionError(f"tomography supports {TOMOGRAPHY_QUBITS} qubits, state has {state.n_parties}")
    table = outcome_probabilities(state, pauli_layout())
    return {"".join(PAULI_LETTERS[i] for i in setting): table[setting] for setting in table.settings}


def exact_tomography(state: QuantumState) -> TomographyDataset:
    """Dataset holding the exact Born-rule probabilities of a state."""
    return TomographyDataset(_pauli_probabilities(state))


def simulate_tomography(state: QuantumState, shots: int, seed: int) -> TomographyDataset:
    """Multinomial counts with ``shots`` events per setting."""
    if shots < 1:
        raise LayoutError(f"shots per setting must be positive, got {shots}")
    rng = np.random.default_rng(seed)
    rows = {}
    for setting, probabilities in _pauli_probabilities(state).items():
        rows[setting] = rng.multinomial(shots, probabilities / probabilities.sum())
    return TomographyDataset(rows)
