"""
Command-line entry point of the GHZ nonlocality toolkit.

python -m src.cli evaluate --counts data.csv --resamples 10000 --seed 1
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError

from ..config.settings import Config
from ..readmodels import reports
from ..services import (
    EvaluationService,
    SimulationService,
    SpacetimeService,
    ThresholdService,
    TomographyService,
    WitnessService,
)
from ..utils.errors import NonlocalityError
from ..utils.logger import LoggerConfig, get_logger

logger = get_logger()

OutputFormat = Literal["text", "json"]


# ============== Request Models ==============

class RunConfig(BaseModel):
    """Flags shared by every subcommand."""

    subcommand: str
    format: OutputFormat = "text"
    seed: int = Field(Config.DEFAULT_SEED, ge=0)


class EvaluateRequest(RunConfig):
    counts: Optional[Path] = None
    resamples: int = Field(Config.DEFAULT_RESAMPLES, ge=Config.MIN_RESAMPLES)
    mode: Literal["multinomial", "poisson"] = "multinomial"


class SimulateRequest(RunConfig):
    p: float = Field(1.0, ge=0, le=1)
    pulses: int = Field(1_000_000, ge=1)
    efficiency: float = Field(1.0, ge=0, le=1)
    out: Optional[Path] = None


class ThresholdsRequest(RunConfig):
    n_max: int = Field(8, ge=3)


class TomoRequest(RunConfig):
    data: Path
    mc: int = Field(100, ge=Config.MIN_MC_SAMPLES)


class SpacetimeRequest(RunConfig):
    layout: Optional[Path] = None


class WitnessRequest(RunConfig):
    expectations: Optional[Path] = None
    data: Optional[Path] = None
    mc: int = Field(100, ge=Config.MIN_MC_SAMPLES)


# ============== Commands ==============

def _emit(request: RunConfig, document: dict, text: str) -> None:
    if request.format == "json":
        print(json.dumps(document, indent=2, ensure_ascii=False))
    else:
        print(text)


def command_evaluate(request: EvaluateRequest) -> int:
    stat = EvaluationService.evaluate(request.counts, request.resamples, request.seed, request.mode)
    _emit(request, reports.evaluation_document(stat), reports.evaluation_text(stat))
    return 0


def command_simulate(request: SimulateRequest) -> int:
    run = SimulationService.simulate(request.p, request.pulses, request.efficiency, request.seed, request.out)
    _emit(request, reports.simulation_document(run), reports.simulation_text(run))
    return 0


def command_thresholds(request: ThresholdsRequest) -> int:
    rows = ThresholdService.table(request.n_max)
    classical, ideal = EvaluationService.classical(), EvaluationService.ideal()
    _emit(
        request,
        reports.thresholds_document(rows, classical, ideal),
        reports.thresholds_text(rows, classical, ideal),
    )
    return 0


def command_tomo(request: TomoRequest) -> int:
    result = TomographyService.reconstruct(request.data, request.mc, request.seed)
    _emit(request, reports.tomography_document(result), reports.tomography_text(result))
    return 0


def command_spacetime(request: SpacetimeRequest) -> int:
    result = SpacetimeService.audit(request.layout)
    _emit(request, reports.spacetime_document(result), reports.spacetime_text(result))
    return 0


def command_witness(request: WitnessRequest) -> int:
    if (request.expectations is None) == (request.data is None):
        raise NonlocalityError("witness needs exactly one of --expectations or --data")
    if request.expectations is not None:
        report = WitnessService.from_expectations(request.expectations)
    else:
        report = WitnessService.from_dataset(request.data, request.mc, request.seed)
    _emit(request, reports.witness_document(report), reports.witness_text(report))
    return 0


COMMANDS: Dict[str, tuple] = {
    "evaluate": (EvaluateRequest, command_evaluate),
    "simulate": (SimulateRequest, command_simulate),
    "thresholds": (ThresholdsRequest, command_thresholds),
    "tomo": (TomoRequest, command_tomo),
    "spacetime": (SpacetimeRequest, command_spacetime),
    "witness": (WitnessRequest, command_witness),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghz-nonlocality",
        description="Genuine multipartite nonlocality analysis for GHZ experiments.",
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=Config.DEFAULT_SEED)

    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    evaluate = subparsers.add_parser("evaluate", parents=[common, seeded], help="F with bootstrap error bars.")
    evaluate.add_argument("--counts", type=Path, default=None, help="Counts CSV; bundled GHZ3 data if omitted.")
    evaluate.add_argument("--resamples", type=int, default=Config.DEFAULT_RESAMPLES)
    evaluate.add_argument("--mode", choices=["multinomial", "poisson"], default="multinomial")

    simulate = subparsers.add_parser("simulate", parents=[common, seeded], help="Simulate a triggered run.")
    simulate.add_argument("--p", type=float, default=1.0, help="Visibility of the GHZ state.")
    simulate.add_argument("--pulses", type=int, default=1_000_000)
    simulate.add_argument("--efficiency", type=float, default=1.0)
    simulate.add_argument("--out", type=Path, default=None, help="Counts CSV to write.")

    thresholds = subparsers.add_parser("thresholds", parents=[common], help="Noise thresholds for N parties.")
    thresholds.add_argument("--n-max", dest="n_max", type=int, default=8)

    tomo = subparsers.add_parser("tomo", parents=[common, seeded], help="Three-qubit state tomography.")
    tomo.add_argument("--data", type=Path, required=True)
    tomo.add_argument("--mc", type=int, default=100)

    spacetime = subparsers.add_parser("spacetime", parents=[common], help="Locality-closure audit.")
    spacetime.add_argument("--layout", type=Path, default=None, help="Layout JSON; bundled layout if omitted.")

    witness = subparsers.add_parser("witness", parents=[common, seeded], help="GHZ3 fidelity witness.")
    witness.add_argument("--expectations", type=Path, default=None)
    witness.add_argument("--data", type=Path, default=None, help="Tomography CSV holding the witness rows.")
    witness.add_argument("--mc", type=int, default=100)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level:
        LoggerConfig.setup_logger(args.log_level)

    model, command = COMMANDS[args.subcommand]
    values = {key: value for key, value in vars(args).items() if key != "log_level"}
    try:
        request = model.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        parser.error(f"{args.subcommand}: --{str(first['loc'][0]).replace('_', '-')}: {first['msg']}")

    handler: Callable[[BaseModel], int] = command
    try:
        return handler(request)
    except (NonlocalityError, OSError) as e:
        logger.error(f"{args.subcommand} failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
