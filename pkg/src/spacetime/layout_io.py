"""
JSON layout files for the space-time audit.

Example::

    {
      "nodes": {"Alice": "party", "S1": "source", ...},
      "distances": [{"a": "Alice", "b": "S1", "value": 104, "uncertainty": 1}, ...],
      "fibers": [{"a": "Alice", "b": "S1", "value": 112.6, "uncertainty": 0.1}, ...],
      "delay_chains": {
        "Alice": {
          "detection": {"segments": [{"name": "measurement", "value": 44.6, "uncertainty": 0.5}, ...],
                        "total": {"value": 767.8, "uncertainty": 0.5}},
          "basis": {"segments": [...]}
        }
      },
      "uncertainty_mode": "fixed:4",
      "light_speed": "printed"
    }
"""

import json
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..datasets.counts import FIXTURES_DIR, Source, read_text
from ..utils.errors import ConfigurationError, ParseError
from ..utils.logger import get_logger
from .audit import DelayChain, Measured, NodeTiming, SpacetimeLayout

logger = get_logger()

REFERENCE_LAYOUT_FIXTURE = FIXTURES_DIR / "experiment_layout.json"


class MeasuredModel(BaseModel):
    value: float
    uncertainty: float = Field(0.0, ge=0)

    def to_measured(self) -> Measured:
        return Measured(self.value, self.uncertainty)


class SegmentModel(MeasuredModel):
    name: str
    value: float = Field(ge=0)


class ChainModel(BaseModel):
    segments: List[SegmentModel] = Field(min_length=1)
    total: Optional[MeasuredModel] = None

    def to_chain(self) -> DelayChain:
        return DelayChain(
            segments=tuple((s.name, s.to_measured()) for s in self.segments),
            reported_total=self.total.to_measured() if self.total else None,
        )


class LinkModel(MeasuredModel):
    a: str = Field(min_length=1)
    b: str = Field(min_length=1)

    @model_validator(mode="after")
    def distinct_ends(self) -> "LinkModel":
        if self.a == self.b:
            raise ValueError(f"link must join two different nodes, got {self.a!r} twice")
        return self


class NodeTimingModel(BaseModel):
    detection: ChainModel
    basis: ChainModel


class LayoutModel(BaseModel):
    nodes: Dict[str, Literal["party", "source"]]
    distances: List[LinkModel]
    fibers: List[LinkModel] = Field(default_factory=list)
    delay_chains: Dict[str, NodeTimingModel] = Field(default_factory=dict)
    uncertainty_mode: str = Field("rss", pattern=r"^(rss|fixed:\d+(\.\d+)?)$")
    light_speed: Literal["printed", "exact"] = "exact"
    measurement_segment: str = "measurement"


def _pairs(links: List[LinkModel], kind: str) -> Dict[frozenset, Measured]:
    result = {}
    for link in links:
        pair = frozenset((link.a, link.b))
        if pair in result:
            raise ConfigurationError(f"{kind} between {link.a} and {link.b} is given twice")
        result[pair] = link.to_measured()
    return result


def layout_from_model(model: LayoutModel) -> SpacetimeLayout:
    return SpacetimeLayout(
        nodes=dict(model.nodes),
        distances=_pairs(model.distances, "distance"),
        fibers=_pairs(model.fibers, "fiber"),
        chains={
            name: NodeTiming(detection=timing.detection.to_chain(), basis=timing.basis.to_chain())
            for name, timing in model.delay_chains.items()
        },
        uncertainty_mode=model.uncertainty_mode,
        light_speed=model.light_speed,
        measurement_segment=model.measurement_segment,
    )


def load_layout(source: Source) -> SpacetimeLayout:
    """
    Parse and validate a layout file.

    Raises:
        ParseError: not valid JSON
        ConfigurationError: schema or consistency violation
    """
    try:
        document = json.loads(read_text(source))
    except json.JSONDecodeError as e:
        raise ParseError(f"layout is not valid JSON: {e.msg}", e.lineno)
    try:
        model = LayoutModel.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigurationError(f"invalid layout at {location}: {first['msg']}")
    layout = layout_from_model(model)
    logger.info(f"load_layout: {len(layout.nodes)} nodes, {len(layout.parties)} parties")
    return layout


def reference_layout() -> SpacetimeLayout:
    """Bundled layout of the three-station experiment."""
    return load_layout(REFERENCE_LAYOUT_FIXTURE)


def layout_to_document(layout: SpacetimeLayout) -> dict:
    """Inverse of load_layout, as a JSON-ready dict."""
    def measured(value: Measured) -> dict:
        return {"value": value.value, "uncertainty": value.uncertainty}

    def links(values: Dict[frozenset, Measured]) -> list:
        rows = []
        for pair, value in values.items():
            a, b = sorted(pair)
            rows.append({"a": a, "b": b, **measured(value)})
        return sorted(rows, key=lambda row: (row["a"], row["b"]))

    def chain(value: DelayChain) -> dict:
        document = {"segments": [dict(name=name, **measured(v)) for name, v in value.segments]}
        if value.reported_total is not None:
            document["total"] = measured(value.reported_total)
        return document

    return {
        "nodes": dict(layout.nodes),
        "distances": links(layout.distances),
        "fibers": links(layout.fibers),
        "delay_chains": {
            name: {"detection": chain(timing.detection), "basis": chain(timing.basis)}
            for name, timing in layout.chains.items()
        },
        "uncertainty_mode": layout.uncertainty_mode,
        "light_speed": layout.light_speed,
        "measurement_segment": layout.measurement_segment,
    }
