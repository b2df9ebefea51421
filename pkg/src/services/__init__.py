"""
Service layer for the GHZ nonlocality toolkit.

Provides the operations the command line runs, between argument parsing and
the analysis library.
"""

from .evaluation_service import EvaluationService
from .simulation_service import SimulationService
from .spacetime_service import SpacetimeService
from .threshold_service import ThresholdService
from .tomography_service import TomographyService
from .witness_service import WitnessService

__all__ = [
    "EvaluationService",
    "SimulationService",
    "SpacetimeService",
    "ThresholdService",
    "TomographyService",
    "WitnessService",
]
