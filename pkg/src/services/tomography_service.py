"""
Tomography service for three-qubit datasets.
"""

from pathlib import Path
from typing import Optional, Union

from ..analytics.tomography import ReconstructionResult, reconstruct
from ..config.settings import Config
from ..datasets.tomography_io import TomographyDataset, load_tomography
from ..quantum.states import QuantumState, ghz_state
from ..utils.logger import get_logger

logger = get_logger()


class TomographyService:
    """Service for state reconstruction."""

    @staticmethod
    def load(data_path: Union[str, Path]) -> TomographyDataset:
        logger.info(f"Loading tomography data from {data_path}")
        return load_tomography(Path(data_path))

    @staticmethod
    def reconstruct(
        data_path: Union[str, Path],
        mc_samples: int = 100,
        seed: int = Config.DEFAULT_SEED,
        target: Optional[QuantumState] = None,
        workers: Optional[int] = None,
    ) -> ReconstructionResult:
        """
        Reconstruct the state of a tomography CSV.

        Args:
            data_path: Tomography CSV with 27 Pauli settings
            mc_samples: Monte Carlo redraws for the fidelity error
            seed: Root seed
            target: Pure reference state, GHZ3 if None
            workers: Thread count

        Returns:
            ReconstructionResult
        """
        dataset = TomographyService.load(data_path)
        target = target or ghz_state(3)
        result = reconstruct(dataset, target, mc_samples=mc_samples, seed=seed, workers=workers)
        if result.raw_min_eigenvalue < 0:
            logger.info(f"Raw estimate was unphysical (min eigenvalue {result.raw_min_eigenvalue:.3e})")
        return result
