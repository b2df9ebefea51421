"""
Bell game, Same game and the combined F functional for N >= 3 parties.

Correlators that do not depend on a party's input pool every compatible row
of the table. Rows are weighted by ``ProbabilityTable.weight`` (trial counts
for estimated tables, 1 for exact ones).

Scores are evaluated by a batched kernel over arrays shaped (batch, rows,
outcomes) so that bootstrap resamples and point estimates share one code path.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import Config
from ..quantum.measurement import (
    MeasurementLayout,
    ProbabilityTable,
    Setting,
    expectation,
    n_party_layout,
    outcome_signs,
)
from ..quantum.states import QuantumState
from ..utils.errors import (
    ConditioningError,
    DomainError,
    LayoutError,
    SingularDenominatorError,
)
from ..utils.logger import get_logger

logger = get_logger()

BELL_PAIRS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
BELL_COEFFICIENTS = np.array([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class InequalityReport:
    """Value of the F functional and the game scores it is built from."""

    i_bell: float
    i_same: float
    c1_mean: float
    f_value: float
    n_parties: int
    classical_bound: float = Config.CLASSICAL_BOUND
    quantum_max: float = Config.QUANTUM_MAX
    correlators: Dict[str, float] = field(default_factory=dict)

    @property
    def violation(self) -> float:
        return self.f_value - self.classical_bound

    @property
    def violates(self) -> bool:
        return self.f_value > self.classical_bound


def _charlies(n: int) -> List[int]:
    return list(range(2, n))


def charlie_label(n: int, k: int) -> str:
    """Name of Charlie k (1-based); a lone Charlie is unnumbered."""
    return "C" if n == 3 else f"C[{k}]"


def bell_label(x: int, y: int) -> str:
    return f"A{x}B{y}"


@dataclass(frozen=True)
class PooledTerm:
    """Correlator of ``parties`` averaged over the table rows it may use."""

    label: str
    rows: Tuple[int, ...]
    parties: Tuple[int, ...]


@dataclass(frozen=True)
class FunctionalPlan:
    """Row indices of a table that each score term reads."""

    n_parties: int
    settings: Tuple[Setting, ...]
    bell_rows: Tuple[int, ...]
    same_terms: Tuple[PooledTerm, ...]
    c1_term: PooledTerm

    @classmethod
    def build(cls, settings: Sequence[Setting], n: int) -> "FunctionalPlan":
        settings = tuple(tuple(s) for s in settings)
        return cls(
            n_parties=n,
            settings=settings,
            bell_rows=tuple(bell_row(settings, n, x, y) for x, y in BELL_PAIRS),
            same_terms=same_terms(settings, n),
            c1_term=c1_term(settings, n),
        )


def _check_parties(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise DomainError(f"the game needs at least three parties, got {n}")


def bell_row(settings: Sequence[Setting], n: int, x: int, y: int) -> int:
    wanted = (x, y) + (1,) * (n - 2)
    try:
        return list(settings).index(wanted)
    except ValueError:
        raise LayoutError(f"table has no row for setting {wanted}")


def _pooled(settings: Sequence[Setting], label: str, parties: Tuple[int, ...], required: Dict[int, int]) -> PooledTerm:
    rows = tuple(
        index for index, setting in enumerate(settings)
        if all(setting[party] == value for party, value in required.items())
    )
    if not rows:
        raise LayoutError(f"table has no rows for {label} (needs inputs {required})")
    return PooledTerm(label, rows, parties)


def same_terms(settings: Sequence[Setting], n: int) -> Tuple[PooledTerm, ...]:
    """<A0 B2>, <B2 C0[1]> and the chain <C0[k] C0[k+1]>."""
    first = charlie_label(n, 1)
    terms = [
        _pooled(settings, "A0B2", (0, 1), {0: 0, 1: 2}),
        _pooled(settings, f"B2{first}0", (1, 2), {1: 2, 2: 0}),
    ]
    for party in range(2, n - 1):
        label = f"{charlie_label(n, party - 1)}0{charlie_label(n, party)}0"
        terms.append(_pooled(settings, label, (party, party + 1), {party: 0, party + 1: 0}))
    return tuple(terms)


def c1_term(settings: Sequence[Setting], n: int) -> PooledTerm:
    """Collective Charlie outcome with every Charlie on input 1."""
    label = "C1" if n == 3 else "C~1"
    return _pooled(settings, label, tuple(_charlies(n)), {party: 1 for party in _charlies(n)})


def _parity(n: int, parties: Sequence[int]) -> np.ndarray:
    return outcome_signs(n)[:, list(parties)].prod(axis=1).astype(float)


def conditional_batch(probabilities: np.ndarray, row: int, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """<A B> on one row given the collective Charlie outcome +1; returns (values, defined)."""
    charlie_plus = _parity(n, _charlies(n)) > 0
    ab = _parity(n, (0, 1))[charlie_plus]
    selected = probabilities[:, row, :][:, charlie_plus]
    denominator = selected.sum(axis=1)
    defined = denominator > Config.PROBABILITY_TOLERANCE
    values = np.divide(selected @ ab, denominator, out=np.zeros_like(denominator), where=defined)
    return values, defined


def pooled_batch(probabilities: np.ndarray, weights: np.ndarray, term: PooledTerm, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted mean of a term's correlator over its rows; returns (values, defined)."""
    rows = list(term.rows)
    values = probabilities[:, rows, :] @ _parity(n, term.parties)
    row_weights = weights[:, rows]
    total = row_weights.sum(axis=1)
    defined = total > 0
    pooled = np.divide((row_weights * values).sum(axis=1), total, out=np.zeros_like(total), where=defined)
    return pooled, defined


@dataclass
class ScoreBatch:
    """Score terms for a batch of tables sharing one plan."""

    bell_terms: np.ndarray
    same_terms: np.ndarray
    c1_mean: np.ndarray
    conditioned: np.ndarray
    singular: np.ndarray

    @property
    def i_bell(self) -> np.ndarray:
        return self.bell_terms @ BELL_COEFFICIENTS

    @property
    def i_same(self) -> np.ndarray:
        return self.same_terms.sum(axis=1)

    @property
    def valid(self) -> np.ndarray:
        return self.conditioned & ~self.singular

    def f_values(self, n: int) -> np.ndarray:
        denominator = 1.0 + self.c1_mean
        safe = np.where(self.valid, denominator, 1.0)
        f = self.i_bell + (4.0 * self.i_same - 4.0 * (n - 1)) / safe
        return np.where(self.valid, f, np.nan)


def score_batch(probabilities: np.ndarray, weights: np.ndarray, plan: FunctionalPlan) -> ScoreBatch:
    """
    Evaluate every score term of a batch of tables.

    Args:
        probabilities: (batch, rows, 2^N) outcome distributions in plan row order
        weights: (batch, rows) pooling weights, zero for rows without data
        plan: Row indices of each term

    Returns:
        ScoreBatch with masks for undefined conditionals and singular denominators
    """
    n = plan.n_parties
    batch = probabilities.shape[0]
    bell = np.empty((batch, len(plan.bell_rows)))
    conditioned = np.ones(batch, dtype=bool)
    for column, row in enumerate(plan.bell_rows):
        bell[:, column], defined = conditional_batch(probabilities, row, n)
        conditioned &= defined & (weights[:, row] > 0)

    same = np.empty((batch, len(plan.same_terms)))
    for column, term in enumerate(plan.same_terms):
        same[:, column], defined = pooled_batch(probabilities, weights, term, n)
        conditioned &= defined

    c1, defined = pooled_batch(probabilities, weights, plan.c1_term, n)
    conditioned &= defined
    singular = (1.0 + c1) <= Config.SINGULAR_EPSILON
    return ScoreBatch(bell, same, c1, conditioned, singular)


def table_arrays(table: ProbabilityTable, settings: Sequence[Setting]) -> Tuple[np.ndarray, np.ndarray]:
    """(1, rows, 2^N) probabilities and (1, rows) weights of a table."""
    probabilities = np.array([table[s] for s in settings])[np.newaxis]
    weights = np.array([table.weight(s) for s in settings])[np.newaxis]
    return probabilities, weights


def _bell_labels() -> List[str]:
    return [bell_label(x, y) for x, y in BELL_PAIRS]


def _report_from_batch(scores: ScoreBatch, plan: FunctionalPlan) -> InequalityReport:
    n = plan.n_parties
    if not scores.conditioned[0]:
        raise ConditioningError("Charlie never outputs +1 on input 1, the Bell game is undefined")
    if scores.singular[0]:
        raise SingularDenominatorError(
            f"1 + <C1> = {1.0 + scores.c1_mean[0]:.3g} is below {Config.SINGULAR_EPSILON}"
        )
    correlators = dict(zip(_bell_labels(), scores.bell_terms[0].tolist()))
    correlators.update({term.label: float(v) for term, v in zip(plan.same_terms, scores.same_terms[0])})
    correlators[plan.c1_term.label] = float(scores.c1_mean[0])
    return InequalityReport(
        i_bell=float(scores.i_bell[0]),
        i_same=float(scores.i_same[0]),
        c1_mean=float(scores.c1_mean[0]),
        f_value=float(scores.f_values(n)[0]),
        n_parties=n,
        correlators=correlators,
    )


def conditional_ab_correlator(table: ProbabilityTable, x: int, y: int) -> float:
    """<A_x B_y> given that the Charlies on input 1 output collective +1."""
    n = table.n_parties
    _check_parties(n)
    settings = table.settings
    row = bell_row(settings, n, x, y)
    probabilities, _ = table_arrays(table, settings)
    values, defined = conditional_batch(probabilities, row, n)
    if not defined[0]:
        raise ConditioningError(f"no weight on collective Charlie outcome +1 for setting {settings[row]}")
    return float(values[0])


def i_bell(table: ProbabilityTable) -> float:
    """CHSH combination of the conditional Alice-Bob correlators."""
    terms = [conditional_ab_correlator(table, x, y) for x, y in BELL_PAIRS]
    return float(np.dot(BELL_COEFFICIENTS, terms))


def i_same(table: ProbabilityTable) -> float:
    """<A0 B2> + <B2 C0> (plus the Charlie chain for N > 3), pooled over rows."""
    n = table.n_parties
    _check_parties(n)
    settings = table.settings
    probabilities, weights = table_arrays(table, settings)
    total = 0.0
    for term in same_terms(settings, n):
        value, _ = pooled_batch(probabilities, weights, term, n)
        total += float(value[0])
    return total


def c1_mean(table: ProbabilityTable) -> float:
    n = table.n_parties
    _check_parties(n)
    settings = table.settings
    probabilities, weights = table_arrays(table, settings)
    value, _ = pooled_batch(probabilities, weights, c1_term(settings, n), n)
    return float(value[0])


def n_party_f(table: ProbabilityTable, n: int) -> InequalityReport:
    """
    F = I_Bell + (4 I_Same - 4(N-1)) / (1 + <C~1>) on an N-party table.

    Args:
        table: Table over the N-party layout (sparse tables allowed)
        n: Number of parties

    Returns:
        InequalityReport including the per-correlator breakdown
    """
    _check_parties(n)
    if table.n_parties != n:
        raise LayoutError(f"table has {table.n_parties} parties, expected {n}")
    plan = FunctionalPlan.build(table.settings, n)
    probabilities, weights = table_arrays(table, plan.settings)
    report = _report_from_batch(score_batch(probabilities, weights, plan), plan)
    logger.debug(f"n_party_f: N={n} F={report.f_value:.6f}")
    return report


def f_score(table: ProbabilityTable) -> InequalityReport:
    """Tripartite F = I_Bell + (4 I_Same - 8) / (1 + <C1>)."""
    if table.n_parties != 3:
        raise LayoutError(f"f_score needs a tripartite table, got {table.n_parties} parties")
    return n_party_f(table, 3)


def collective_charlie(outputs: Sequence[int]) -> int:
    """Product of the Charlies' outputs: +1 iff an even number output -1."""
    if len(outputs) == 0:
        raise DomainError("collective outcome needs at least one Charlie")
    for value in outputs:
        if value not in (1, -1):
            raise DomainError(f"Charlie outputs must be +1 or -1, got {value!r}")
    return int(np.prod(outputs))


def f_from_state(state: QuantumState, layout: Optional[MeasurementLayout] = None) -> InequalityReport:
    """F from expectation values alone, without building a probability table."""
    n = state.n_parties
    _check_parties(n)
    layout = layout or n_party_layout(n)
    if layout.n_parties != n:
        raise LayoutError(f"layout has {layout.n_parties} parties but the state has {n} qubits")
    alice, bob = layout.parties[0], layout.parties[1]
    charlies_one = [layout.parties[k][1] for k in _charlies(n)]
    identity = [None] * (n - 2)

    c1 = expectation(state, [None, None] + charlies_one)
    if 1.0 + c1 <= Config.PROBABILITY_TOLERANCE:
        raise ConditioningError("collective Charlie outcome +1 has zero probability")

    correlators: Dict[str, float] = {}
    for x, y in BELL_PAIRS:
        plain = expectation(state, [alice[x], bob[y]] + identity)
        with_charlies = expectation(state, [alice[x], bob[y]] + charlies_one)
        correlators[bell_label(x, y)] = (plain + with_charlies) / (1.0 + c1)

    correlators["A0B2"] = expectation(state, [alice[0], bob[2]] + identity)
    observables = [None, bob[2], layout.parties[2][0]] + [None] * (n - 3)
    correlators[f"B2{charlie_label(n, 1)}0"] = expectation(state, observables)
    for party in range(2, n - 1):
        observables = [None] * n
        observables[party] = layout.parties[party][0]
        observables[party + 1] = layout.parties[party + 1][0]
        label = f"{charlie_label(n, party - 1)}0{charlie_label(n, party)}0"
        correlators[label] = expectation(state, observables)

    bell_value = float(np.dot(BELL_COEFFICIENTS, [correlators[label] for label in _bell_labels()]))
    same_value = float(sum(v for k, v in correlators.items() if k not in _bell_labels()))
    correlators["C1" if n == 3 else "C~1"] = c1
    if 1.0 + c1 <= Config.SINGULAR_EPSILON:
        raise SingularDenominatorError(f"1 + <C1> = {1.0 + c1:.3g} is below {Config.SINGULAR_EPSILON}")
    f_value = bell_value + (4.0 * same_value - 4.0 * (n - 1)) / (1.0 + c1)
    return InequalityReport(
        i_bell=bell_value,
        i_same=same_value,
        c1_mean=c1,
        f_value=f_value,
        n_parties=n,
        correlators=correlators,
    )
