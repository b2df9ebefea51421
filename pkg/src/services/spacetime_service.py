"""
Space-time audit service.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Union

from ..spacetime.audit import ClosureReport, Measured, SpacetimeLayout, audit, basis_choice_times
from ..spacetime.layout_io import load_layout, reference_layout
from ..utils.logger import get_logger

logger = get_logger()


@dataclass
class SpacetimeAudit:
    """Closure margins of a layout and the basis-choice times they use."""

    layout: SpacetimeLayout
    basis_times: Dict[str, Measured]
    closures: List[ClosureReport]

    @property
    def fiber_excess(self) -> Dict[FrozenSet[str], Measured]:
        return self.layout.fiber_excess()

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.closures)


class SpacetimeService:
    """Service for locality-closure audits."""

    @staticmethod
    def audit(layout_path: Optional[Union[str, Path]] = None) -> SpacetimeAudit:
        """
        Audit a layout file, or the bundled experiment layout when no path is given.

        Args:
            layout_path: Layout JSON (optional)

        Returns:
            SpacetimeAudit
        """
        if layout_path is None:
            logger.info("Using bundled experiment layout")
            layout = reference_layout()
        else:
            logger.info(f"Loading layout from {layout_path}")
            layout = load_layout(Path(layout_path))
        closures = audit(layout)
        result = SpacetimeAudit(layout=layout, basis_times=basis_choice_times(layout), closures=closures)
        logger.info(f"Space-time audit {'passed' if result.passed else 'failed'} for {len(closures)} closures")
        return result
