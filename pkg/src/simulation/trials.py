"""
Event-level simulation of the triggered GHZ3 experiment.

Each pulse carries the four-photon state (|HHHH> + |VVVV>)/sqrt(2) mixed with
white noise. The fourth photon is the trigger, measured in the diagonal
basis. Settings come from a random-number generator; Bob turns two random
bits into a ternary choice by discarding the pattern 11. A trial counts when
the trigger clicks with outcome +1 and all three parties click.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..datasets.counts import CountsTable
from ..quantum.measurement import X, MeasurementLayout, ghz3_layout, outcome_probabilities
from ..quantum.states import QuantumState, fidelity_with_pure, ghz_state, mix_white_noise, project_party
from ..utils.batching import batch_sizes, map_batches, substream
from ..utils.errors import ConfigurationError, DomainError
from ..utils.logger import get_logger

logger = get_logger()

PARTIES = ("Alice", "Bob", "Charlie")
BOB_REJECTED_BITS = (1, 1)
PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
MINUS = np.array([1.0, -1.0]) / np.sqrt(2)


def _check_probability(value: float, name: str) -> None:
    if not isinstance(value, (int, float, np.floating)) or not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of one simulated run."""

    n_pulses: int
    p: float = 1.0
    efficiencies: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    trigger_efficiency: float = 1.0
    alice_probabilities: Tuple[float, float] = (0.5, 0.5)
    charlie_probabilities: Tuple[float, float] = (0.5, 0.5)
    seed: int = Config.DEFAULT_SEED

    def __post_init__(self):
        if not isinstance(self.n_pulses, (int, np.integer)) or self.n_pulses < 1:
            raise DomainError(f"n_pulses must be a positive integer, got {self.n_pulses!r}")
        _check_probability(self.p, "p")
        _check_probability(self.trigger_efficiency, "trigger_efficiency")
        if len(self.efficiencies) != len(PARTIES):
            raise ConfigurationError(f"need one efficiency per party, got {len(self.efficiencies)}")
        for party, value in zip(PARTIES, self.efficiencies):
            _check_probability(value, f"{party} efficiency")
        for name in ("alice_probabilities", "charlie_probabilities"):
            probabilities = np.asarray(getattr(self, name), dtype=float)
            if probabilities.shape != (2,) or (probabilities < 0).any():
                raise ConfigurationError(f"{name} must hold two nonnegative probabilities")
            if abs(probabilities.sum() - 1.0) > Config.PROBABILITY_TOLERANCE:
                raise ConfigurationError(f"{name} must sum to 1, got {probabilities.sum()!r}")

    @property
    def detector_efficiencies(self) -> np.ndarray:
        """(A, B, C, trigger) click probabilities."""
        return np.array(list(self.efficiencies) + [self.trigger_efficiency])


@dataclass(frozen=True)
class SettingDraw:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    bob_rejections: int


@dataclass(frozen=True)
class TrialRecord:
    """One pulse; ``None`` marks a detector that did not click."""

    pulse_index: int
    settings: Tuple[int, int, int]
    trigger_outcome: Optional[int]
    outcomes: Tuple[Optional[int], Optional[int], Optional[int]]
    accepted: bool


@dataclass
class TrialDiagnostics:
    """Totals of a run; all fields add across batches."""

    pulses: int = 0
    trigger_clicks: int = 0
    trigger_plus: int = 0
    accepted: int = 0
    bob_draws: int = 0
    bob_rejections: int = 0
    setting_draws: Dict[str, int] = field(default_factory=dict)
    accepted_per_setting: Dict[str, int] = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.pulses if self.pulses else 0.0

    @property
    def trigger_plus_rate(self) -> float:
        return self.trigger_plus / self.pulses if self.pulses else 0.0

    @property
    def rejection_rate(self) -> float:
        """Fraction of Bob's two-bit draws that were discarded."""
        return self.bob_rejections / self.bob_draws if self.bob_draws else 0.0

    def merge(self, other: "TrialDiagnostics") -> None:
        for name in ("pulses", "trigger_clicks", "trigger_plus", "accepted", "bob_draws", "bob_rejections"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        for target, source in ((self.setting_draws, other.setting_draws),
                               (self.accepted_per_setting, other.accepted_per_setting)):
            for key, value in source.items():
                target[key] = target.get(key, 0) + value


def draw_settings(rng: np.random.Generator, config: TrialConfig, size: int = 1) -> SettingDraw:
    """
    Draw ``size`` setting triples.

    Alice and Charlie sample their configured distributions. Bob draws two
    bits and redraws every pair equal to the rejected pattern.
    """
    x = rng.choice(2, size=size, p=config.alice_probabilities)
    bits = rng.integers(0, 2, size=(size, 2))
    rejections = 0
    pending = np.flatnonzero((bits == BOB_REJECTED_BITS).all(axis=1))
    while pending.size:
        rejections += pending.size
        bits[pending] = rng.integers(0, 2, size=(pending.size, 2))
        pending = pending[(bits[pending] == BOB_REJECTED_BITS).all(axis=1)]
    y = 2 * bits[:, 0] + bits[:, 1]
    z = rng.choice(2, size=size, p=config.charlie_probabilities)
    return SettingDraw(x=x, y=y, z=z, bob_rejections=rejections)


def four_photon_state(p: float) -> QuantumState:
    """GHZ4 (A, B, C, trigger) with white-noise weight 1 - p."""
    state = ghz_state(4)
    return state if p == 1.0 else mix_white_noise(state, p)


def _setting_distributions(config: TrialConfig, layout: MeasurementLayout) -> np.ndarray:
    """(settings, 16) outcome distributions with the trigger measured in X (lowest bit)."""
    extended = MeasurementLayout(tuple(layout.parties) + ((X,),))
    settings = [s + (0,) for s in layout.settings()]
    table = outcome_probabilities(four_photon_state(config.p), extended, settings)
    return np.array([table[s] for s in settings])


def _check_layout(layout: MeasurementLayout) -> None:
    if layout.alphabet_sizes != (2, 3, 2):
        raise ConfigurationError(f"the simulated stations need input alphabets (2, 3, 2), got {layout.alphabet_sizes}")


@dataclass
class _BatchResult:
    setting_index: np.ndarray
    outcomes: np.ndarray
    clicks: np.ndarray
    bob_rejections: int


def _simulate_batch(
    index: int,
    size: int,
    config: TrialConfig,
    distributions: np.ndarray,
) -> _BatchResult:
    rng = substream(config.seed, index)
    draw = draw_settings(rng, config, size)
    setting_index = np.ravel_multi_index((draw.x, draw.y, draw.z), (2, 3, 2))
    outcomes = np.empty(size, dtype=np.int64)
    for setting in np.unique(setting_index):
        members = np.flatnonzero(setting_index == setting)
        outcomes[members] = rng.choice(16, size=members.size, p=distributions[setting])
    clicks = rng.random((size, 4)) < config.detector_efficiencies
    return _BatchResult(setting_index, outcomes, clicks, draw.bob_rejections)


def _accepted_mask(result: _BatchResult) -> np.ndarray:
    trigger_plus = (result.outcomes & 1) == 0
    return result.clicks.all(axis=1) & trigger_plus


def run_trials(
    config: TrialConfig,
    layout: Optional[MeasurementLayout] = None,
    workers: Optional[int] = None,
) -> Tuple[CountsTable, TrialDiagnostics]:
    """
    Simulate ``config.n_pulses`` pulses and keep the four-fold coincidences.

    Args:
        config: Run parameters, including the root seed
        layout: Observables per party, defaults to the GHZ3 game layout
        workers: Thread count for batches

    Returns:
        (counts of accepted trials, run diagnostics)
    """
    layout = layout or ghz3_layout()
    _check_layout(layout)
    settings = layout.settings()
    keys = ["".join(str(s) for s in setting) for setting in settings]
    distributions = _setting_distributions(config, layout)

    def run_batch(index: int, size: int) -> Tuple[np.ndarray, TrialDiagnostics]:
        result = _simulate_batch(index, size, config, distributions)
        accepted = _accepted_mask(result)
        counts = np.zeros((len(settings), 8), dtype=np.int64)
        np.add.at(counts, (result.setting_index[accepted], result.outcomes[accepted] >> 1), 1)
        drawn = np.bincount(result.setting_index, minlength=len(settings))
        kept = counts.sum(axis=1)
        trigger_click = result.clicks[:, 3]
        diagnostics = TrialDiagnostics(
            pulses=size,
            trigger_clicks=int(trigger_click.sum()),
            trigger_plus=int((trigger_click & ((result.outcomes & 1) == 0)).sum()),
            accepted=int(accepted.sum()),
            bob_draws=size + result.bob_rejections,
            bob_rejections=result.bob_rejections,
            setting_draws=dict(zip(keys, drawn.tolist())),
            accepted_per_setting=dict(zip(keys, kept.tolist())),
        )
        return counts, diagnostics

    results = map_batches(run_batch, batch_sizes(config.n_pulses, Config.SIMULATION_BATCH), workers, "trials_")
    counts = np.zeros((len(settings), 8), dtype=np.int64)
    diagnostics = TrialDiagnostics()
    for batch_counts, batch_diagnostics in results:
        counts += batch_counts
        diagnostics.merge(batch_diagnostics)

    if diagnostics.accepted == 0:
        logger.warning(f"run_trials: no accepted trials in {config.n_pulses} pulses")
    logger.info(
        f"run_trials: {diagnostics.accepted} of {diagnostics.pulses} pulses accepted "
        f"(p={config.p}, seed={config.seed})"
    )
    return CountsTable(n_parties=3, rows=dict(zip(keys, counts))), diagnostics


def simulate_records(
    config: TrialConfig,
    layout: Optional[MeasurementLayout] = None,
    limit: int = 100,
) -> List[TrialRecord]:
    """Per-pulse records of the first ``limit`` pulses of a run."""
    layout = layout or ghz3_layout()
    _check_layout(layout)
    size = min(int(limit), config.n_pulses)
    result = _simulate_batch(0, size, config, _setting_distributions(config, layout))
    accepted = _accepted_mask(result)
    settings = np.unravel_index(result.setting_index, (2, 3, 2))
    records = []
    for pulse in range(size):
        signs = [1 - 2 * ((result.outcomes[pulse] >> shift) & 1) for shift in (3, 2, 1, 0)]
        clicked = result.clicks[pulse]
        records.append(TrialRecord(
            pulse_index=pulse,
            settings=tuple(int(axis[pulse]) for axis in settings),
            trigger_outcome=int(signs[3]) if clicked[3] else None,
            outcomes=tuple(int(sign) if click else None for sign, click in zip(signs[:3], clicked[:3])),
            accepted=bool(accepted[pulse]),
        ))
    return records


def conditioned_state(p: float = 1.0, trigger_outcome: int = 1) -> QuantumState:
    """Three-photon state left after the trigger is found in |+> (or |->)."""
    if trigger_outcome not in (1, -1):
        raise DomainError(f"trigger outcome must be +1 or -1, got {trigger_outcome!r}")
    vector = PLUS if trigger_outcome == 1 else MINUS
    state, _ = project_party(four_photon_state(p), 3, vector)
    return state


def conditioned_state_check(p: float = 1.0, trigger_outcome: int = 1) -> float:
    """Fidelity of the conditioned state with (|000> +/- |111>)/sqrt(2)."""
    target = ghz_state(3)
    if trigger_outcome == -1:
        vector = target.vector.copy()
        vector[-1] = -vector[-1]
        target = QuantumState(n_parties=3, vector=vector)
    return fidelity_with_pure(conditioned_state(p, trigger_outcome), target)


def diagnostics_report(diagnostics: TrialDiagnostics) -> str:
    """Flat ``key=value`` lines."""
    lines = [
        f"pulses={diagnostics.pulses}",
        f"trigger_clicks={diagnostics.trigger_clicks}",
        f"trigger_plus={diagnostics.trigger_plus}",
        f"trigger_plus_rate={diagnostics.trigger_plus_rate:.6f}",
        f"accepted={diagnostics.accepted}",
        f"acceptance_rate={diagnostics.acceptance_rate:.6f}",
        f"bob_draws={diagnostics.bob_draws}",
        f"bob_rejections={diagnostics.bob_rejections}",
        f"bob_rejection_rate={diagnostics.rejection_rate:.6f}",
    ]
    lines += [f"drawn.{key}={value}" for key, value in sorted(diagnostics.setting_draws.items())]
    lines += [f"accepted.{key}={value}" for key, value in sorted(diagnostics.accepted_per_setting.items())]
    return "\n".join(lines) + "\n"
