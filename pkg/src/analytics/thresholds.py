"""
White-noise thresholds for violating F > 2 with an N-party GHZ state.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import optimize

from ..config.settings import Config
from ..quantum.measurement import ProbabilityTable, n_party_layout, outcome_probabilities, required_settings
from ..quantum.states import fidelity_with_pure, ghz_state
from ..utils.errors import DomainError
from ..utils.logger import get_logger
from .inequality import n_party_f

logger = get_logger()


@dataclass(frozen=True)
class ThresholdResult:
    """Closed-form thresholds with optional root-found cross-checks."""

    n_parties: int
    visibility_threshold: float
    fidelity_threshold: float
    visibility_numeric: Optional[float] = None
    fidelity_numeric: Optional[float] = None


def _check_parties(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise DomainError(f"thresholds are defined for N >= 3, got {n}")


def visibility_threshold(n: int) -> float:
    """p* = (2N - 1) / (2N - 2 + sqrt(2))."""
    _check_parties(n)
    return (2 * n - 1) / (2 * n - 2 + np.sqrt(2))


def fidelity_threshold(n: int) -> float:
    """f* = (2N - 1 + (sqrt(2) - 1) / 2^N) / (2N - 2 + sqrt(2))."""
    _check_parties(n)
    return (2 * n - 1 + (np.sqrt(2) - 1) / 2 ** n) / (2 * n - 2 + np.sqrt(2))


@lru_cache(maxsize=None)
def _ghz_table(n: int) -> ProbabilityTable:
    return outcome_probabilities(ghz_state(n), n_party_layout(n), required_settings(n))


def white_noise_table(n: int, p: float) -> ProbabilityTable:
    """
    Born-rule table of p |GHZ_N><GHZ_N| + (1 - p) I / 2^N.

    Mixes the pure GHZ table with the uniform distribution row by row.
    """
    _check_parties(n)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"visibility must lie in [0, 1], got {p}")
    pure = _ghz_table(n)
    uniform = 1.0 / 2 ** n
    return ProbabilityTable(
        n_parties=n,
        distributions={setting: p * pure[setting] + (1.0 - p) * uniform for setting in pure.settings},
    )


def white_noise_f(n: int, p: float) -> float:
    """F of the noisy GHZ_N state, evaluated through its Born-rule table."""
    return n_party_f(white_noise_table(n, p), n).f_value


def white_noise_fidelity(n: int, p: float) -> float:
    """GHZ fidelity of the noisy state: p <GHZ|GHZ><GHZ|GHZ> + (1 - p) / 2^N."""
    target = ghz_state(n)
    return p * fidelity_with_pure(target, target) + (1.0 - p) / 2 ** n


def visibility_threshold_numeric(n: int, xtol: float = 1e-12) -> float:
    """Root of F(p) = 2 by bisection over noisy Born-rule tables."""
    _check_parties(n)
    root = optimize.bisect(lambda p: white_noise_f(n, p) - Config.CLASSICAL_BOUND, 0.5, 1.0, xtol=xtol)
    logger.debug(f"visibility_threshold_numeric: N={n} p*={root:.12f}")
    return float(root)


def fidelity_threshold_numeric(n: int, xtol: float = 1e-12) -> float:
    """GHZ fidelity of the state sitting exactly at the numeric visibility threshold."""
    return white_noise_fidelity(n, visibility_threshold_numeric(n, xtol))


def threshold_result(n: int, numeric: bool = False) -> ThresholdResult:
    """
    Thresholds for one party count.

    Args:
        n: Number of parties (>= 3)
        numeric: Also root-find both thresholds from simulated states

    Returns:
        ThresholdResult
    """
    _check_parties(n)
    visibility_numeric = fidelity_numeric = None
    if numeric:
        visibility_numeric = visibility_threshold_numeric(n)
        fidelity_numeric = white_noise_fidelity(n, visibility_numeric)
    return ThresholdResult(
        n_parties=int(n),
        visibility_threshold=visibility_threshold(n),
        fidelity_threshold=fidelity_threshold(n),
        visibility_numeric=visibility_numeric,
        fidelity_numeric=fidelity_numeric,
    )
