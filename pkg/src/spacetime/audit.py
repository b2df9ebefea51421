"""
Locality-closure margins between detection and basis-choice events.

Times are in ns from the start of a trial, distances in meters. A closure
margin is positive when the detection at one station happens before light
from another station's basis choice could arrive.
"""

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from ..config.settings import Config
from ..utils.errors import ConfigurationError
from ..utils.logger import get_logger

logger = get_logger()

ROLES = ("party", "source")
LIGHT_SPEEDS = {"printed": Config.LIGHT_SPEED_PRINTED, "exact": Config.LIGHT_SPEED_EXACT}
_FIXED_MODE = re.compile(r"^fixed:(\d+(?:\.\d+)?)$")


@dataclass(frozen=True)
class Measured:
    """Value with a one-sigma uncertainty."""

    value: float
    uncertainty: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value) or not math.isfinite(self.uncertainty) or self.uncertainty < 0:
            raise ConfigurationError(f"invalid measurement {self.value} +/- {self.uncertainty}")

    def __add__(self, other: "Measured") -> "Measured":
        return Measured(self.value + other.value, math.hypot(self.uncertainty, other.uncertainty))

    def __sub__(self, other: "Measured") -> "Measured":
        return Measured(self.value - other.value, math.hypot(self.uncertainty, other.uncertainty))

    def __str__(self) -> str:
        return f"{self.value:.1f} ± {self.uncertainty:.1f}"


Quantity = Union[float, int, Measured]


def _measured(value: Quantity) -> Measured:
    return value if isinstance(value, Measured) else Measured(float(value))


@dataclass(frozen=True)
class DelayChain:
    """
    Named delay segments in order.

    ``reported_total`` replaces the segment sum when a table states its own
    total; the difference is kept in ``discrepancy``.
    """

    segments: Tuple[Tuple[str, Measured], ...]
    reported_total: Optional[Measured] = None

    def __post_init__(self):
        segments = tuple((str(name), _measured(value)) for name, value in self.segments)
        names = [name for name, _ in segments]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate segment names in {names}")
        for name, value in segments:
            if value.value < 0:
                raise ConfigurationError(f"segment {name!r} has negative duration {value.value}")
        if self.reported_total is not None and self.reported_total.value < 0:
            raise ConfigurationError("reported chain total is negative")
        object.__setattr__(self, "segments", segments)

    def segment(self, name: str) -> Measured:
        for segment_name, value in self.segments:
            if segment_name == name:
                return value
        raise ConfigurationError(f"delay chain has no segment named {name!r}")

    @property
    def segment_sum(self) -> Measured:
        total = Measured(0.0)
        for _, value in self.segments:
            total = total + value
        return total

    @property
    def total(self) -> Measured:
        return self.reported_total if self.reported_total is not None else self.segment_sum

    @property
    def discrepancy(self) -> float:
        return self.total.value - self.segment_sum.value


@dataclass(frozen=True)
class NodeTiming:
    """Photon delays up to detection and delays of the basis selection."""

    detection: DelayChain
    basis: DelayChain


@dataclass(frozen=True)
class ClosureReport:
    """Margin by which ``detector``'s detection lies outside ``chooser``'s light cone."""

    detector: str
    chooser: str
    margin: float
    uncertainty: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", self.margin - self.uncertainty > 0)


def _pair(a: str, b: str) -> FrozenSet[str]:
    return frozenset((a, b))


@dataclass(frozen=True)
class SpacetimeLayout:
    """Stations, beeline distances, fiber lengths and delay chains."""

    nodes: Mapping[str, str]
    distances: Mapping[FrozenSet[str], Measured]
    fibers: Mapping[FrozenSet[str], Measured] = field(default_factory=dict)
    chains: Mapping[str, NodeTiming] = field(default_factory=dict)
    uncertainty_mode: str = "rss"
    light_speed: str = "exact"
    measurement_segment: str = "measurement"

    def __post_init__(self):
        for name, role in self.nodes.items():
            if role not in ROLES:
                raise ConfigurationError(f"node {name!r} has unknown role {role!r}")
        if self.light_speed not in LIGHT_SPEEDS:
            raise ConfigurationError(f"light speed mode must be one of {sorted(LIGHT_SPEEDS)}, got {self.light_speed!r}")
        if self.uncertainty_mode != "rss" and not _FIXED_MODE.match(self.uncertainty_mode):
            raise ConfigurationError(f"uncertainty mode must be 'rss' or 'fixed:<ns>', got {self.uncertainty_mode!r}")
        for links, kind in ((self.distances, "distance"), (self.fibers, "fiber")):
            for pair, value in links.items():
                if len(pair) != 2 or not pair <= set(self.nodes):
                    raise ConfigurationError(f"{kind} {sorted(pair)} must join two known nodes")
                if value.value <= 0:
                    raise ConfigurationError(f"{kind} {'-'.join(sorted(pair))} must be positive")
        for name in self.chains:
            if name not in self.nodes:
                raise ConfigurationError(f"delay chains given for unknown node {name!r}")
        self._check_triangles()
        self._check_fibers()

    def _check_fibers(self) -> None:
        for pair, excess in self.fiber_excess().items():
            if excess.value + excess.uncertainty < 0:
                raise ConfigurationError(
                    f"fiber {'-'.join(sorted(pair))} is shorter than the beeline distance by {-excess.value:.2f} m"
                )

    def fiber_excess(self) -> Dict[FrozenSet[str], Measured]:
        """Fiber length minus beeline distance for every fiber with a known distance."""
        return {pair: fiber - self.distances[pair] for pair, fiber in self.fibers.items() if pair in self.distances}

    def _check_triangles(self) -> None:
        for a, b, c in itertools.combinations(self.nodes, 3):
            sides = [self.distances.get(_pair(*p)) for p in ((a, b), (b, c), (a, c))]
            if any(side is None for side in sides):
                continue
            slack = sum(side.uncertainty for side in sides)
            for i, side in enumerate(sides):
                others = sum(s.value for j, s in enumerate(sides) if j != i)
                if side.value > others + slack:
                    raise ConfigurationError(f"distances between {a}, {b}, {c} violate the triangle inequality")

    @property
    def parties(self) -> List[str]:
        return [name for name, role in self.nodes.items() if role == "party"]

    @property
    def c(self) -> float:
        """Light speed in m/ns."""
        return LIGHT_SPEEDS[self.light_speed]

    @property
    def fixed_uncertainty(self) -> Optional[float]:
        match = _FIXED_MODE.match(self.uncertainty_mode)
        return float(match.group(1)) if match else None

    def distance(self, a: str, b: str) -> Measured:
        try:
            return self.distances[_pair(a, b)]
        except KeyError:
            raise ConfigurationError(f"no distance given between {a} and {b}")


def earliest_basis_choice(
    node: str,
    detection_total: Quantity,
    measurement_delay: Quantity,
    basis_chain_total: Quantity,
) -> Measured:
    """Detection time minus measurement and basis-selection delays."""
    detection, measurement, basis = (_measured(v) for v in (detection_total, measurement_delay, basis_chain_total))
    for label, value in (("detection", detection), ("measurement", measurement), ("basis chain", basis)):
        if value.value < 0:
            raise ConfigurationError(f"{node}: {label} time must be nonnegative, got {value.value}")
    earliest = detection - measurement - basis
    if earliest.value < 0:
        raise ConfigurationError(f"{node}: basis choice at {earliest.value:.1f} ns precedes the trial start")
    return earliest


def locality_closure(
    layout: SpacetimeLayout,
    chooser_basis_time: Quantity,
    detector_detection_time: Quantity,
    distance: Quantity,
    detector: str = "",
    chooser: str = "",
) -> ClosureReport:
    """
    Margin = chooser basis time + distance / c - detector detection time.

    The uncertainty is the layout's fixed value, or the root-sum-square of the
    three inputs in ``rss`` mode.
    """
    basis, detection, length = (_measured(v) for v in (chooser_basis_time, detector_detection_time, distance))
    if length.value < 0:
        raise ConfigurationError(f"distance must be nonnegative, got {length.value}")
    travel = Measured(length.value / layout.c, length.uncertainty / layout.c)
    margin = basis + travel - detection
    uncertainty = layout.fixed_uncertainty
    if uncertainty is None:
        uncertainty = margin.uncertainty
    return ClosureReport(detector=detector, chooser=chooser, margin=margin.value, uncertainty=uncertainty)


def basis_choice_times(layout: SpacetimeLayout, chains: Optional[Mapping[str, NodeTiming]] = None) -> Dict[str, Measured]:
    """Earliest basis-choice time of every party."""
    chains = layout.chains if chains is None else chains
    times = {}
    for party in layout.parties:
        if party not in chains:
            raise ConfigurationError(f"no delay chains given for {party}")
        timing = chains[party]
        for kind, chain in (("detection", timing.detection), ("basis", timing.basis)):
            if abs(chain.discrepancy) > 1e-9:
                logger.warning(
                    f"basis_choice_times: {party} {kind} total {chain.total.value} differs from "
                    f"its segments by {chain.discrepancy:+.1f} ns, using the reported total"
                )
        times[party] = earliest_basis_choice(
            party,
            timing.detection.total,
            timing.detection.segment(layout.measurement_segment),
            timing.basis.total,
        )
    return times


def audit(layout: SpacetimeLayout, chains: Optional[Mapping[str, NodeTiming]] = None) -> List[ClosureReport]:
    """
    Closure margins for every ordered (detector, chooser) pair of parties.

    Args:
        layout: Stations and distances
        chains: Timing per party, defaults to the layout's own chains

    Returns:
        ClosureReports ordered by detector, then chooser
    """
    chains = layout.chains if chains is None else chains
    choices = basis_choice_times(layout, chains)
    reports = []
    for detector in layout.parties:
        detection = chains[detector].detection.total
        for chooser in layout.parties:
            if chooser == detector:
                continue
            reports.append(locality_closure(
                layout, choices[chooser], detection, layout.distance(detector, chooser), detector, chooser
            ))
    failed = [f"{r.detector}<-{r.chooser}" for r in reports if not r.passed]
    if failed:
        logger.warning(f"audit: locality not closed for {', '.join(failed)}")
    logger.info(f"audit: {len(reports)} closures, {len(reports) - len(failed)} pass")
    return reports
