"""
Point evaluation of count data and bootstrap error bars.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..datasets.counts import CountsTable, counts_to_probabilities
from ..quantum.measurement import Setting, ghz3_layout, required_settings
from ..utils.batching import batch_sizes, map_batches, substream
from ..utils.errors import DomainError
from ..utils.logger import get_logger
from .inequality import BELL_PAIRS, FunctionalPlan, InequalityReport, bell_label, n_party_f, score_batch

logger = get_logger()

RESAMPLING_MODES = ("multinomial", "poisson")


@dataclass
class StatReport:
    """F with its bootstrap standard deviation and significance."""

    f_value: float
    sigma: float
    sigma_violation: float
    n_events: int
    resamples: int
    seed: int
    mode: str = "multinomial"
    excluded: int = 0
    unstable: bool = False
    correlator_sigmas: Dict[str, float] = field(default_factory=dict)
    report: Optional[InequalityReport] = None

    @property
    def excluded_fraction(self) -> float:
        return self.excluded / self.resamples if self.resamples else 0.0


def evaluation_settings(n: int) -> List[Setting]:
    """Setting rows count data must provide for an N-party evaluation."""
    return ghz3_layout().settings() if n == 3 else required_settings(n)


def _usable_settings(counts: CountsTable) -> List[Setting]:
    required = set(evaluation_settings(counts.n_parties))
    counts.require(required)
    return [s for s in counts.settings if s in required or counts.total(s) > 0]


def evaluate_counts(counts: CountsTable) -> InequalityReport:
    """F of the relative frequencies, pooled terms weighted by row totals."""
    table = counts_to_probabilities(counts, _usable_settings(counts))
    report = n_party_f(table, counts.n_parties)
    logger.info(f"evaluate_counts: F={report.f_value:.6f} from {counts.n_events} events")
    return report


def _term_labels(plan: FunctionalPlan) -> List[str]:
    labels = [bell_label(x, y) for x, y in BELL_PAIRS]
    labels += [term.label for term in plan.same_terms]
    return labels + [plan.c1_term.label]


def _resample(
    matrix: np.ndarray,
    totals: np.ndarray,
    size: int,
    rng: np.random.Generator,
    mode: str,
) -> Tuple[np.ndarray, np.ndarray]:
    """(size, rows, outcomes) resampled frequencies and (size, rows) row weights."""
    if mode == "multinomial":
        frequencies = matrix / totals[:, np.newaxis]
        draws = np.stack(
            [rng.multinomial(total, row, size=size) for total, row in zip(totals, frequencies)],
            axis=1,
        )
        weights = np.broadcast_to(totals.astype(float), (size, totals.shape[0]))
    else:
        draws = rng.poisson(matrix, size=(size,) + matrix.shape)
        weights = draws.sum(axis=2).astype(float)
    probabilities = np.divide(
        draws, weights[..., np.newaxis], out=np.zeros(draws.shape), where=weights[..., np.newaxis] > 0
    )
    return probabilities, weights


def bootstrap_sigma(
    counts: CountsTable,
    resamples: int = Config.DEFAULT_RESAMPLES,
    seed: int = Config.DEFAULT_SEED,
    mode: str = "multinomial",
    workers: Optional[int] = None,
) -> StatReport:
    """
    Parametric bootstrap of F over the count table.

    Args:
        counts: Count table holding every row the evaluation needs
        resamples: Number of resampled tables (>= Config.MIN_RESAMPLES)
        seed: Root seed; batch b draws from substream (seed, b)
        mode: "multinomial" keeps row totals fixed, "poisson" redraws every cell
        workers: Thread count for batches

    Returns:
        StatReport; resamples with an undefined F are excluded and counted
    """
    if not isinstance(resamples, (int, np.integer)) or resamples < Config.MIN_RESAMPLES:
        raise DomainError(f"resamples must be an integer >= {Config.MIN_RESAMPLES}, got {resamples}")
    if mode not in RESAMPLING_MODES:
        raise DomainError(f"unknown resampling mode {mode!r}, expected one of {RESAMPLING_MODES}")

    n = counts.n_parties
    point = evaluate_counts(counts)
    settings = _usable_settings(counts)
    plan = FunctionalPlan.build(settings, n)
    matrix = counts.matrix(settings)
    totals = matrix.sum(axis=1)

    def run_batch(index: int, size: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        probabilities, weights = _resample(matrix, totals, size, substream(seed, index), mode)
        scores = score_batch(probabilities, weights, plan)
        terms = np.column_stack([scores.bell_terms, scores.same_terms, scores.c1_mean])
        return scores.f_values(n), scores.valid, terms

    results = map_batches(run_batch, batch_sizes(resamples, Config.BOOTSTRAP_BATCH), workers, "bootstrap_")
    f_values = np.concatenate([r[0] for r in results])
    valid = np.concatenate([r[1] for r in results])
    terms = np.concatenate([r[2] for r in results])

    excluded = int((~valid).sum())
    unstable = excluded > Config.INSTABILITY_FRACTION * resamples
    if unstable:
        logger.warning(
            f"bootstrap_sigma: {excluded} of {resamples} resamples had an undefined F and were excluded"
        )
    if valid.sum() < 2:
        sigma = math.nan
        term_sigmas = [math.nan] * terms.shape[1]
    else:
        sigma = float(np.std(f_values[valid], ddof=1))
        term_sigmas = np.std(terms[valid], axis=0, ddof=1).tolist()

    violation = point.f_value - Config.CLASSICAL_BOUND
    sigma_violation = violation / sigma if sigma > 0 else math.nan
    logger.info(
        f"bootstrap_sigma: F={point.f_value:.4f} sigma={sigma:.4f} ({sigma_violation:.2f} sigma) "
        f"over {resamples} {mode} resamples"
    )
    return StatReport(
        f_value=point.f_value,
        sigma=sigma,
        sigma_violation=sigma_violation,
        n_events=counts.n_events,
        resamples=int(resamples),
        seed=int(seed),
        mode=mode,
        excluded=excluded,
        unstable=unstable,
        correlator_sigmas=dict(zip(_term_labels(plan), term_sigmas)),
        report=point,
    )
