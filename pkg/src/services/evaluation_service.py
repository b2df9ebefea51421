"""
Evaluation service for count data and exact strategies.

Handles:
- F with bootstrap error bars from a counts file or the bundled fixture
- F of the ideal and white-noise GHZ3 strategies
- Brute-force classical bound
"""

from pathlib import Path
from typing import Optional, Union

from ..analytics.classical import ClassicalBoundResult, classical_bound
from ..analytics.inequality import InequalityReport, f_from_state
from ..analytics.statistics import StatReport, bootstrap_sigma
from ..config.settings import Config
from ..datasets.counts import CountsTable, load_counts, load_ghz3_fixture
from ..quantum.states import ghz_state, mix_white_noise
from ..utils.logger import get_logger

logger = get_logger()


class EvaluationService:
    """Service for evaluating the F functional."""

    @staticmethod
    def load(counts_path: Optional[Union[str, Path]] = None) -> CountsTable:
        """
        Load a counts CSV, or the bundled GHZ3 fixture when no path is given.

        Args:
            counts_path: Path to a counts CSV (optional)

        Returns:
            CountsTable
        """
        if counts_path is None:
            logger.info("Using bundled GHZ3 counts fixture")
            return load_ghz3_fixture()
        logger.info(f"Loading counts from {counts_path}")
        return load_counts(Path(counts_path))

    @staticmethod
    def evaluate(
        counts_path: Optional[Union[str, Path]] = None,
        resamples: int = Config.DEFAULT_RESAMPLES,
        seed: int = Config.DEFAULT_SEED,
        mode: str = "multinomial",
        workers: Optional[int] = None,
    ) -> StatReport:
        """
        Evaluate F and its bootstrap error for a counts file.

        Args:
            counts_path: Path to a counts CSV, bundled fixture if None
            resamples: Bootstrap resamples
            seed: Root seed of the bootstrap
            mode: "multinomial" or "poisson"
            workers: Thread count, Config.WORKERS if None

        Returns:
            StatReport with the point report attached
        """
        counts = EvaluationService.load(counts_path)
        report = bootstrap_sigma(counts, resamples=resamples, seed=seed, mode=mode, workers=workers)
        verdict = "violates" if report.report is not None and report.report.violates else "does not violate"
        logger.info(f"Evaluation finished: F={report.f_value:.4f} {verdict} the bound {Config.CLASSICAL_BOUND}")
        return report

    @staticmethod
    def ideal(p: float = 1.0) -> InequalityReport:
        """F of the GHZ3 strategy with visibility p."""
        state = ghz_state(3)
        if p != 1.0:
            state = mix_white_noise(state, p)
        return f_from_state(state)

    @staticmethod
    def classical() -> ClassicalBoundResult:
        """Largest F over deterministic local strategies."""
        result = classical_bound()
        logger.info(
            f"Classical bound: max F={result.max_f} over {result.evaluated} strategies "
            f"({result.undefined} undefined)"
        )
        return result
