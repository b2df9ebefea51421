"""
Threshold service for white-noise GHZ_N states.
"""

from typing import List

from ..analytics.thresholds import ThresholdResult, threshold_result
from ..utils.errors import DomainError
from ..utils.logger import get_logger

logger = get_logger()


class ThresholdService:
    """Service for visibility and fidelity thresholds."""

    @staticmethod
    def table(n_max: int, numeric: bool = True) -> List[ThresholdResult]:
        """
        Thresholds for N = 3..n_max.

        Args:
            n_max: Largest party count (>= 3)
            numeric: Add root-found cross-checks

        Returns:
            One ThresholdResult per party count
        """
        if n_max < 3:
            raise DomainError(f"n_max must be at least 3, got {n_max}")
        rows = [threshold_result(n, numeric=numeric) for n in range(3, n_max + 1)]
        logger.info(f"Thresholds computed for N=3..{n_max}")
        return rows
