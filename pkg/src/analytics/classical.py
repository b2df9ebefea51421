"""
Exhaustive check of the F bound over deterministic local strategies (N = 3).
"""

import itertools
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..quantum.measurement import ProbabilityTable, outcome_signs
from ..utils.errors import ConditioningError, SingularDenominatorError
from ..utils.logger import get_logger
from .inequality import f_score

logger = get_logger()

# response functions: one +/-1 output per input
Strategy = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]

ALPHABET_SIZES = (2, 3, 2)


@dataclass
class ClassicalBoundResult:
    """Largest F over deterministic strategies and the strategies reaching it."""

    max_f: float
    evaluated: int
    undefined: int
    maximizers: List[Strategy] = field(default_factory=list)


def deterministic_table(strategy: Strategy) -> ProbabilityTable:
    """Table where each party outputs its response to its own input."""
    signs = outcome_signs(3)
    distributions = {}
    for setting in itertools.product(*(range(size) for size in ALPHABET_SIZES)):
        outputs = [strategy[party][value] for party, value in enumerate(setting)]
        row = np.zeros(8)
        row[int(np.flatnonzero((signs == outputs).all(axis=1))[0])] = 1.0
        distributions[setting] = row
    return ProbabilityTable(n_parties=3, distributions=distributions)


def deterministic_strategies():
    """All 2^2 x 2^3 x 2^2 response functions."""
    responses = [list(itertools.product((1, -1), repeat=size)) for size in ALPHABET_SIZES]
    return itertools.product(*responses)


def classical_bound(tolerance: float = 1e-12) -> ClassicalBoundResult:
    """
    Evaluate F for every deterministic local strategy.

    Strategies where Charlie answers -1 on input 1 leave the Bell game
    undefined; they are counted and skipped.
    """
    best = -np.inf
    maximizers: List[Strategy] = []
    evaluated = undefined = 0
    for strategy in deterministic_strategies():
        evaluated += 1
        try:
            value = f_score(deterministic_table(strategy)).f_value
        except (ConditioningError, SingularDenominatorError):
            undefined += 1
            continue
        if value > best + tolerance:
            best, maximizers = value, [strategy]
        elif abs(value - best) <= tolerance:
            maximizers.append(strategy)
    logger.info(f"classical_bound: max F={best} over {evaluated - undefined} strategies, {undefined} undefined")
    return ClassicalBoundResult(max_f=float(best), evaluated=evaluated, undefined=undefined, maximizers=maximizers)
