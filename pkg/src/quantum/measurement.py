"""
Dichotomic observables, measurement layouts and Born-rule probability tables.

Outcome strings are indexed like basis states: party 0 is the most
significant bit, bit 0 means outcome +1 and bit 1 means outcome -1, so the
iteration order for three parties is +++, ++-, +-+, +--, -++, -+-, --+, ---.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import Config
from ..utils.errors import DimensionError, DomainError, LayoutError
from ..utils.logger import get_logger
from .states import QuantumState, apply_local

logger = get_logger()

Setting = Tuple[int, ...]

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class DichotomicObservable:
    """2x2 Hermitian observable with eigenvalues exactly +1 and -1."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise DimensionError(f"observable must be 2x2, got {matrix.shape}")
        if np.max(np.abs(matrix - matrix.conj().T)) > Config.EIGEN_TOLERANCE:
            raise DomainError(f"observable {self.label!r} is not Hermitian")
        # closed-form eigenvalues of a 2x2 Hermitian matrix
        half_trace = np.trace(matrix).real / 2
        det = np.linalg.det(matrix).real
        gap = np.sqrt(max(half_trace ** 2 - det, 0.0))
        upper, lower = half_trace + gap, half_trace - gap
        if abs(upper - 1.0) > Config.EIGEN_TOLERANCE or abs(lower + 1.0) > Config.EIGEN_TOLERANCE:
            raise DomainError(
                f"observable {self.label!r} has eigenvalues ({upper:.12g}, {lower:.12g}), expected (+1, -1)"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def projectors(self) -> Tuple[np.ndarray, np.ndarray]:
        """(Pi_plus, Pi_minus) = ((I + O)/2, (I - O)/2)."""
        return (I2 + self.matrix) / 2, (I2 - self.matrix) / 2

    def eigenbasis(self) -> np.ndarray:
        """Unitary whose rows are <e+| and <e-|."""
        rows = []
        for projector in self.projectors:
            column = projector[:, int(np.argmax(np.linalg.norm(projector, axis=0)))]
            rows.append(column.conj() / np.linalg.norm(column))
        return np.array(rows)

    @classmethod
    def from_bloch(cls, z: float, x: float, y: float = 0.0, label: str = "") -> "DichotomicObservable":
        """Observable z*Z + x*X + y*Y for a unit Bloch vector."""
        return cls(z * PAULI_Z + x * PAULI_X + y * PAULI_Y, label)


Z = DichotomicObservable(PAULI_Z, "Z")
X = DichotomicObservable(PAULI_X, "X")
Y = DichotomicObservable(PAULI_Y, "Y")
Z_PLUS_X = DichotomicObservable.from_bloch(1 / np.sqrt(2), 1 / np.sqrt(2), label="(Z+X)/√2")
Z_MINUS_X = DichotomicObservable.from_bloch(1 / np.sqrt(2), -1 / np.sqrt(2), label="(Z-X)/√2")

STANDARD_OBSERVABLES = {obs.label: obs for obs in (Z, X, Y, Z_PLUS_X, Z_MINUS_X)}


@dataclass(frozen=True)
class MeasurementLayout:
    """Ordered observables per party; a party's input indexes its list."""

    parties: Tuple[Tuple[DichotomicObservable, ...], ...]

    def __post_init__(self):
        parties = tuple(tuple(choices) for choices in self.parties)
        if not parties:
            raise LayoutError("layout needs at least one party")
        for index, choices in enumerate(parties):
            if not choices:
                raise LayoutError(f"party {index} has no measurement settings")
            for observable in choices:
                if not isinstance(observable, DichotomicObservable):
                    raise LayoutError(f"party {index} lists a non-dichotomic observable")
        object.__setattr__(self, "parties", parties)

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    @property
    def alphabet_sizes(self) -> Tuple[int, ...]:
        return tuple(len(choices) for choices in self.parties)

    def settings(self) -> List[Setting]:
        return list(itertools.product(*(range(size) for size in self.alphabet_sizes)))

    def observables(self, setting: Setting) -> List[DichotomicObservable]:
        if len(setting) != self.n_parties:
            raise LayoutError(f"setting {setting} does not address {self.n_parties} parties")
        try:
            return [self.parties[k][s] for k, s in enumerate(setting)]
        except IndexError:
            raise LayoutError(f"setting {setting} is outside the input alphabets {self.alphabet_sizes}")


def ghz3_layout() -> MeasurementLayout:
    """Alice {Z, X}, Bob {(Z+X)/√2, (Z-X)/√2, Z}, Charlie {Z, X}."""
    return n_party_layout(3)


def n_party_layout(n: int) -> MeasurementLayout:
    """Alice and Bob as in the tripartite game, every Charlie {Z, X}."""
    if n < 3:
        raise DomainError(f"the game needs at least three parties, got {n}")
    return MeasurementLayout(((Z, X), (Z_PLUS_X, Z_MINUS_X, Z)) + ((Z, X),) * (n - 2))


def required_settings(n: int) -> List[Setting]:
    """Sparse setting set touched by the Bell and Same games for n parties."""
    if n < 3:
        raise DomainError(f"the game needs at least three parties, got {n}")
    charlies_one = (1,) * (n - 2)
    bell = [(x, y) + charlies_one for x in (0, 1) for y in (0, 1)]
    return bell + [(0, 2) + (0,) * (n - 2)]


@lru_cache(maxsize=None)
def outcome_signs(n: int) -> np.ndarray:
    """(2^n, n) array of +/-1 outcomes, row index = outcome index."""
    indices = np.arange(2 ** n)[:, np.newaxis]
    bits = (indices >> np.arange(n - 1, -1, -1)) & 1
    signs = 1 - 2 * bits
    signs.setflags(write=False)
    return signs


def outcome_labels(n: int) -> List[str]:
    return ["".join("+" if s > 0 else "-" for s in row) for row in outcome_signs(n)]


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """
    Map from setting tuple to a distribution over the 2^N outcome strings.

    ``weights`` holds the number of trials behind each row when the table was
    estimated from counts; pooled statistics weight rows by it. Exact tables
    leave it empty and pool rows uniformly.
    """

    n_parties: int
    distributions: Mapping[Setting, np.ndarray]
    weights: Mapping[Setting, float] = field(default_factory=dict)

    def __post_init__(self):
        tol = Config.PROBABILITY_TOLERANCE
        size = 2 ** self.n_parties
        distributions: Dict[Setting, np.ndarray] = {}
        for setting, values in self.distributions.items():
            setting = tuple(int(s) for s in setting)
            if len(setting) != self.n_parties:
                raise LayoutError(f"setting {setting} does not address {self.n_parties} parties")
            values = np.array(values, dtype=float).reshape(-1)
            if values.shape != (size,):
                raise LayoutError(f"setting {setting} needs {size} outcome probabilities, got {values.shape[0]}")
            if values.min() < -tol or values.max() > 1 + tol:
                raise DomainError(f"setting {setting} has probabilities outside [0, 1]")
            if abs(values.sum() - 1.0) > tol:
                raise DomainError(f"setting {setting} probabilities sum to {values.sum()!r}")
            values = np.clip(values, 0.0, 1.0)
            values.setflags(write=False)
            distributions[setting] = values
        weights = {tuple(int(s) for s in k): float(v) for k, v in dict(self.weights).items()}
        for setting, weight in weights.items():
            if setting not in distributions or weight <= 0:
                raise LayoutError(f"weight for {setting} must be positive and match a row")
        object.__setattr__(self, "distributions", distributions)
        object.__setattr__(self, "weights", weights)

    def __contains__(self, setting) -> bool:
        return tuple(setting) in self.distributions

    def __getitem__(self, setting) -> np.ndarray:
        try:
            return self.distributions[tuple(setting)]
        except KeyError:
            raise LayoutError(f"table has no row for setting {tuple(setting)}")

    @property
    def settings(self) -> List[Setting]:
        return sorted(self.distributions)

    def weight(self, setting: Setting) -> float:
        return self.weights.get(tuple(setting), 1.0)

    def correlator(self, setting: Setting, parties: Sequence[int]) -> float:
        """<prod_k outcome_k> over the given parties for one setting."""
        signs = outcome_signs(self.n_parties)[:, list(parties)].prod(axis=1)
        return float(self[setting] @ signs)

    def marginal(self, setting: Setting, party: int) -> np.ndarray:
        """(p(+1), p(-1)) for one party."""
        plus = outcome_signs(self.n_parties)[:, party] > 0
        values = self[setting]
        return np.array([values[plus].sum(), values[~plus].sum()])

    def max_signaling_deviation(self) -> float:
        """Largest change of a single-party marginal under other parties' inputs."""
        worst = 0.0
        for party in range(self.n_parties):
            by_input: Dict[int, List[np.ndarray]] = {}
            for setting in self.distributions:
                by_input.setdefault(setting[party], []).append(self.marginal(setting, party))
            for marginals in by_input.values():
                stacked = np.array(marginals)
                worst = max(worst, float(np.max(stacked.max(axis=0) - stacked.min(axis=0))))
        return worst

    def is_non_signaling(self, tolerance: Optional[float] = None) -> bool:
        if tolerance is None:
            tolerance = Config.PROBABILITY_TOLERANCE
        return self.max_signaling_deviation() <= tolerance


def _rotated_probabilities(state: QuantumState, bases: Sequence[np.ndarray]) -> np.ndarray:
    n = state.n_parties
    tensor = state.tensor()
    if state.is_pure:
        for k, basis in enumerate(bases):
            tensor = apply_local(tensor, basis, k)
        return np.abs(tensor.reshape(-1)) ** 2
    for k, basis in enumerate(bases):
        tensor = apply_local(tensor, basis, k)
        tensor = apply_local(tensor, basis.conj(), n + k)
    return np.diagonal(tensor.reshape(2 ** n, 2 ** n)).real.copy()


def outcome_probabilities(
    state: QuantumState,
    layout: MeasurementLayout,
    settings: Optional[Iterable[Setting]] = None,
) -> ProbabilityTable:
    """
    Born-rule table p(outcomes | setting) for every setting of the layout.

    Args:
        state: State shared by the parties
        layout: Observables per party
        settings: Optional subset of settings (sparse N-party tables)

    Returns:
        ProbabilityTable over the requested settings
    """
    if state.n_parties != layout.n_parties:
        raise LayoutError(
            f"state has {state.n_parties} qubits but layout has {layout.n_parties} parties"
        )
    settings = layout.settings() if settings is None else [tuple(s) for s in settings]
    distributions = {}
    for setting in settings:
        bases = [obs.eigenbasis() for obs in layout.observables(setting)]
        probabilities = np.clip(_rotated_probabilities(state, bases), 0.0, 1.0)
        distributions[setting] = probabilities / probabilities.sum()
    logger.debug(f"outcome_probabilities: {len(distributions)} settings on {state.n_parties} qubits")
    return ProbabilityTable(n_parties=state.n_parties, distributions=distributions)


def expectation(state: QuantumState, observables: Sequence[Optional[DichotomicObservable]]) -> float:
    """Tr[rho (O_1 x ... x O_N)]; ``None`` stands for the identity on that party."""
    if len(observables) != state.n_parties:
        raise DimensionError(
            f"{len(observables)} observables given for {state.n_parties} parties"
        )
    tensor = state.tensor()
    for k, observable in enumerate(observables):
        if observable is not None:
            tensor = apply_local(tensor, observable.matrix, k)
    if state.is_pure:
        value = np.vdot(state.vector, tensor.reshape(-1))
    else:
        value = np.trace(tensor.reshape(state.dim, state.dim))
    return float(np.clip(value.real, -1.0, 1.0))
