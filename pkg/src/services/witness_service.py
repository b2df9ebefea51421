"""
Witness service for GHZ3 fidelity estimates.

Handles:
- Witness from a JSON file of populations and correlators
- Witness from a tomography dataset with Monte Carlo error
"""

import json
import math
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..analytics.witness import WitnessReport, witness_fidelity, witness_from_dataset
from ..config.settings import Config
from ..datasets.counts import read_text
from ..datasets.tomography_io import load_tomography
from ..utils.errors import InputError, ParseError
from ..utils.logger import get_logger

logger = get_logger()


class WitnessExpectations(BaseModel):
    """Witness inputs as read from JSON."""

    model_config = ConfigDict(extra="forbid")

    HHH: float = Field(ge=0, le=1)
    VVV: float = Field(ge=0, le=1)
    XXX: float = Field(ge=-1, le=1)
    XYY: float = Field(ge=-1, le=1)
    YXY: float = Field(ge=-1, le=1)
    YYX: float = Field(ge=-1, le=1)


class WitnessService:
    """Service for the GHZ3 fidelity witness."""

    @staticmethod
    def read_expectations(path: Union[str, Path]) -> Dict[str, float]:
        """
        Read witness inputs from JSON.

        Raises:
            ParseError: not valid JSON
            InputError: missing, unknown or out-of-range values
        """
        try:
            document = json.loads(read_text(Path(path)))
        except json.JSONDecodeError as e:
            raise ParseError(f"expectations are not valid JSON: {e.msg}", e.lineno)
        try:
            return WitnessExpectations.model_validate(document).model_dump()
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "document"
            raise InputError(f"invalid witness input at {location}: {first['msg']}")

    @staticmethod
    def from_expectations(path: Union[str, Path]) -> WitnessReport:
        """Witnessed fidelity from a JSON expectation file; sigma is not available."""
        expectations = WitnessService.read_expectations(path)
        fidelity = witness_fidelity(expectations)
        logger.info(f"Witness fidelity from {path}: {fidelity:.4f}")
        return WitnessReport(fidelity=fidelity, sigma=math.nan, expectations=expectations)

    @staticmethod
    def from_dataset(
        data_path: Union[str, Path],
        mc_samples: int = 100,
        seed: int = Config.DEFAULT_SEED,
        workers: Optional[int] = None,
    ) -> WitnessReport:
        """Witnessed fidelity from the witness rows of a tomography CSV."""
        dataset = load_tomography(Path(data_path))
        return witness_from_dataset(dataset, mc_samples=mc_samples, seed=seed, workers=workers)
