"""
Finite-dimensional quantum states on N qubits.

Qubit ordering: party 0 is the most significant bit of the basis index, so
``|abc>`` reads Alice, Bob, Charlie from left to right. ``|0>`` is H (the +1
eigenstate of Z) and ``|1>`` is V.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..utils.errors import ConditioningError, DimensionError, DomainError, UnsupportedError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def apply_local(tensor: np.ndarray, operator: np.ndarray, axis: int) -> np.ndarray:
    """Apply a 2x2 operator to one axis of a (2,)*k tensor."""
    moved = np.tensordot(operator, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state vector or density matrix on ``n_parties`` qubits."""

    n_parties: int
    vector: Optional[np.ndarray] = None
    matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        if not isinstance(self.n_parties, (int, np.integer)) or self.n_parties < 1:
            raise DimensionError(f"n_parties must be a positive integer, got {self.n_parties}")
        if self.n_parties > Config.MAX_QUBITS:
            raise DimensionError(f"{self.n_parties} qubits exceed the cap of {Config.MAX_QUBITS}")
        if (self.vector is None) == (self.matrix is None):
            raise DimensionError("exactly one of vector or matrix must be given")

        dim = 2 ** self.n_parties
        if self.vector is not None:
            vector = _frozen(self.vector).reshape(-1)
            if vector.shape != (dim,):
                raise DimensionError(f"state vector must have length {dim}, got {vector.shape[0]}")
            norm = np.linalg.norm(vector)
            if abs(norm - 1.0) > Config.STATE_TOLERANCE:
                raise DimensionError(f"state vector norm is {norm!r}, expected 1")
            object.__setattr__(self, "vector", vector)
        else:
            matrix = _frozen(self.matrix)
            if matrix.shape != (dim, dim):
                raise DimensionError(f"density matrix must be {dim}x{dim}, got {matrix.shape}")
            if np.max(np.abs(matrix - matrix.conj().T)) > Config.STATE_TOLERANCE:
                raise DimensionError("density matrix is not Hermitian")
            trace = np.trace(matrix).real
            if abs(trace - 1.0) > Config.STATE_TOLERANCE:
                raise DimensionError(f"density matrix trace is {trace!r}, expected 1")
            smallest = np.linalg.eigvalsh(matrix).min()
            if smallest < -Config.PSD_TOLERANCE:
                raise DimensionError(f"density matrix has negative eigenvalue {smallest!r}")
            object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "QuantumState":
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        return cls(n_parties=_qubits_for(vector.shape[0]), vector=vector)

    @classmethod
    def from_density_matrix(cls, matrix: np.ndarray) -> "QuantumState":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(n_parties=_qubits_for(matrix.shape[0]), matrix=matrix)

    @property
    def dim(self) -> int:
        return 2 ** self.n_parties

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density_matrix(self) -> np.ndarray:
        """Density-matrix form; vectors are promoted on demand."""
        if self.matrix is not None:
            return self.matrix
        return np.outer(self.vector, self.vector.conj())

    def tensor(self) -> np.ndarray:
        """(2,)*N view of the vector, or (2,)*2N view of the density matrix."""
        if self.vector is not None:
            return self.vector.reshape((2,) * self.n_parties)
        return self.matrix.reshape((2,) * (2 * self.n_parties))


def _qubits_for(dim: int) -> int:
    n = int(round(np.log2(dim))) if dim > 0 else 0
    if n < 1 or 2 ** n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def ghz_state(n: int) -> QuantumState:
    """(|0...0> + |1...1>)/sqrt(2) on n qubits."""
    if not isinstance(n, (int, np.integer)) or not 2 <= n <= Config.MAX_QUBITS:
        raise DimensionError(f"GHZ state needs 2 <= n <= {Config.MAX_QUBITS}, got {n}")
    vector = np.zeros(2 ** n, dtype=complex)
    vector[0] = vector[-1] = 1 / np.sqrt(2)
    return QuantumState(n_parties=int(n), vector=vector)


def product_state(qubits) -> QuantumState:
    """Tensor product of single-qubit vectors given left to right."""
    vector = np.ones(1, dtype=complex)
    for qubit in qubits:
        qubit = np.asarray(qubit, dtype=complex).reshape(2)
        vector = np.kron(vector, qubit / np.linalg.norm(qubit))
    return QuantumState.from_vector(vector)


def mix_white_noise(state: QuantumState, p: float) -> QuantumState:
    """p * state + (1 - p) * I / 2^N, always in density-matrix form."""
    if not isinstance(p, (int, float, np.floating)) or not 0.0 <= p <= 1.0:
        raise DomainError(f"noise weight p must lie in [0, 1], got {p}")
    rho = p * state.density_matrix() + (1.0 - p) * np.eye(state.dim) / state.dim
    return QuantumState(n_parties=state.n_parties, matrix=rho)


def fidelity_with_pure(state: QuantumState, target: QuantumState) -> float:
    """<target| rho |target> for a pure target."""
    if not target.is_pure:
        raise UnsupportedError("fidelity is only defined here against a pure target")
    if state.n_parties != target.n_parties:
        raise DimensionError(
            f"state has {state.n_parties} qubits but target has {target.n_parties}"
        )
    if state.is_pure:
        value = abs(np.vdot(target.vector, state.vector)) ** 2
    else:
        value = np.vdot(target.vector, state.matrix @ target.vector).real
    return float(np.clip(value, 0.0, 1.0))


def project_party(state: QuantumState, party: int, qubit: np.ndarray) -> Tuple[QuantumState, float]:
    """
    Condition a state on projecting one party onto a pure qubit state.

    Returns the renormalized state of the remaining parties and the
    probability of the projection.
    """
    n = state.n_parties
    if n < 2:
        raise DimensionError("need at least two qubits to condition on one of them")
    if not 0 <= party < n:
        raise DimensionError(f"party index {party} out of range for {n} qubits")
    qubit = np.asarray(qubit, dtype=complex).reshape(2)
    qubit = qubit / np.linalg.norm(qubit)
    bra = qubit.conj()[np.newaxis, :]

    if state.is_pure:
        reduced = np.squeeze(apply_local(state.tensor(), bra, party), axis=party).reshape(-1)
        probability = float(np.vdot(reduced, reduced).real)
        if probability <= Config.PROBABILITY_TOLERANCE:
            raise ConditioningError("projection has zero probability")
        return QuantumState(n_parties=n - 1, vector=reduced / np.sqrt(probability)), probability

    tensor = apply_local(state.tensor(), bra, party)
    tensor = apply_local(tensor, bra.conj(), n + party)
    tensor = np.squeeze(tensor, axis=(party, n + party))
    reduced = tensor.reshape(2 ** (n - 1), 2 ** (n - 1))
    probability = float(np.trace(reduced).real)
    if probability <= Config.PROBABILITY_TOLERANCE:
        raise ConditioningError("projection has zero probability")
    reduced = reduced / probability
    reduced = (reduced + reduced.conj().T) / 2
    return QuantumState(n_parties=n - 1, matrix=reduced), probability
