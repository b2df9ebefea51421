"""
Simulation service for the triggered GHZ3 experiment.

Runs the event-level simulator and writes its counts CSV and diagnostics.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..config.settings import Config
from ..datasets.counts import CountsTable, write_counts
from ..simulation.trials import TrialConfig, TrialDiagnostics, diagnostics_report, run_trials
from ..utils.logger import get_logger

logger = get_logger()

DIAGNOSTICS_SUFFIX = ".diagnostics.txt"


@dataclass
class SimulationRun:
    """Result of one simulated run and where it was written."""

    config: TrialConfig
    counts: CountsTable
    diagnostics: TrialDiagnostics
    counts_path: Optional[Path] = None
    diagnostics_path: Optional[Path] = None


class SimulationService:
    """Service for simulated count data."""

    @staticmethod
    def diagnostics_path(out_path: Union[str, Path]) -> Path:
        """Diagnostics file written next to a counts CSV."""
        out_path = Path(out_path)
        return out_path.with_name(out_path.stem + DIAGNOSTICS_SUFFIX)

    @staticmethod
    def simulate(
        p: float = 1.0,
        pulses: int = 1_000_000,
        efficiency: float = 1.0,
        seed: int = Config.DEFAULT_SEED,
        out_path: Optional[Union[str, Path]] = None,
        workers: Optional[int] = None,
    ) -> SimulationRun:
        """
        Simulate a run and optionally write it to disk.

        Args:
            p: Visibility of the four-photon state
            pulses: Number of pulses
            efficiency: Click probability of every detector, trigger included
            seed: Root seed
            out_path: Counts CSV to write (optional)
            workers: Thread count

        Returns:
            SimulationRun
        """
        config = TrialConfig(
            n_pulses=pulses,
            p=p,
            efficiencies=(efficiency, efficiency, efficiency),
            trigger_efficiency=efficiency,
            seed=seed,
        )
        counts, diagnostics = run_trials(config, workers=workers)
        run = SimulationRun(config=config, counts=counts, diagnostics=diagnostics)

        if out_path is not None:
            run.counts_path = Path(out_path)
            run.counts_path.parent.mkdir(parents=True, exist_ok=True)
            with open(run.counts_path, "w", encoding="utf-8", newline="") as stream:
                write_counts(counts, stream)
            run.diagnostics_path = SimulationService.diagnostics_path(run.counts_path)
            run.diagnostics_path.write_text(diagnostics_report(diagnostics), encoding="utf-8")
            logger.info(f"Simulation written to {run.counts_path} and {run.diagnostics_path}")
        return run
