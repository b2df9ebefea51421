"""Stable-schema documents and text tables for command-line reports."""

import math
from typing import Any, Dict, List, Optional

import pandas as pd

from .. import __version__
from ..analytics.classical import ClassicalBoundResult
from ..analytics.inequality import InequalityReport
from ..analytics.statistics import StatReport
from ..analytics.thresholds import ThresholdResult
from ..analytics.tomography import ReconstructionResult
from ..analytics.witness import WitnessReport
from ..config.settings import Config
from ..services.simulation_service import SimulationRun
from ..services.spacetime_service import SpacetimeAudit

SCHEMA_PREFIX = "ghz_nonlocality"
FIDELITY_NOTE_N3 = "≥93%"


def _number(value: Optional[float]) -> Optional[float]:
    """JSON-safe float; NaN and infinities become None."""
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def _header(command: str, seed: Optional[int] = None) -> Dict[str, Any]:
    header: Dict[str, Any] = {"schema": f"{SCHEMA_PREFIX}.{command}", "version": __version__}
    if seed is not None:
        header["seed"] = int(seed)
    return header


def _bounds() -> Dict[str, float]:
    return {"classical": Config.CLASSICAL_BOUND, "quantum": Config.QUANTUM_MAX}


def _table(frame: pd.DataFrame) -> str:
    return frame.to_string(index=False, float_format=lambda v: f"{v:.4f}")


def evaluation_document(stat: StatReport) -> Dict[str, Any]:
    report = stat.report
    correlators = report.correlators if report is not None else {}
    return {
        **_header("evaluate", stat.seed),
        "resamples": stat.resamples,
        "mode": stat.mode,
        "n_events": stat.n_events,
        "f": _number(stat.f_value),
        "sigma": _number(stat.sigma),
        "violation": _number(stat.f_value - Config.CLASSICAL_BOUND),
        "sigma_violation": _number(stat.sigma_violation),
        "bounds": _bounds(),
        "passed": bool(stat.f_value > Config.CLASSICAL_BOUND),
        "i_bell": _number(report.i_bell) if report else None,
        "i_same": _number(report.i_same) if report else None,
        "c1_mean": _number(report.c1_mean) if report else None,
        "correlators": {
            label: {"value": _number(value), "sigma": _number(stat.correlator_sigmas.get(label))}
            for label, value in correlators.items()
        },
        "excluded": stat.excluded,
        "unstable": stat.unstable,
    }


def evaluation_text(stat: StatReport) -> str:
    document = evaluation_document(stat)
    frame = pd.DataFrame(
        [(label, term["value"], term["sigma"]) for label, term in document["correlators"].items()],
        columns=["term", "value", "sigma"],
    )
    verdict = "PASS (F > 2)" if document["passed"] else "FAIL (F <= 2)"
    lines = [
        f"F = {stat.f_value:.4f} ± {stat.sigma:.4f}",
        f"F - 2 = {stat.f_value - Config.CLASSICAL_BOUND:.4f} ({stat.sigma_violation:.2f} standard deviations)",
        f"bounds: bipartite-GPT {Config.CLASSICAL_BOUND:.4f}, quantum {Config.QUANTUM_MAX:.4f}",
        f"events: {stat.n_events}, resamples: {stat.resamples} ({stat.mode}), seed: {stat.seed}",
    ]
    if stat.excluded:
        lines.append(f"excluded resamples: {stat.excluded}{' (unstable)' if stat.unstable else ''}")
    lines += ["", _table(frame), "", f"result: {verdict}"]
    return "\n".join(lines)


def simulation_document(run: SimulationRun) -> Dict[str, Any]:
    diagnostics = run.diagnostics
    return {
        **_header("simulate", run.config.seed),
        "p": run.config.p,
        "pulses": run.config.n_pulses,
        "efficiency": list(run.config.detector_efficiencies.tolist()),
        "accepted": diagnostics.accepted,
        "acceptance_rate": diagnostics.acceptance_rate,
        "trigger_plus_rate": diagnostics.trigger_plus_rate,
        "bob_rejection_rate": diagnostics.rejection_rate,
        "accepted_per_setting": dict(sorted(diagnostics.accepted_per_setting.items())),
        "counts_path": str(run.counts_path) if run.counts_path else None,
        "diagnostics_path": str(run.diagnostics_path) if run.diagnostics_path else None,
    }


def simulation_text(run: SimulationRun) -> str:
    diagnostics = run.diagnostics
    lines = [
        f"pulses: {diagnostics.pulses}, accepted: {diagnostics.accepted} "
        f"(rate {diagnostics.acceptance_rate:.6f}), seed: {run.config.seed}",
        f"trigger +1 rate: {diagnostics.trigger_plus_rate:.6f}, "
        f"Bob rejection rate: {diagnostics.rejection_rate:.6f}",
    ]
    if run.counts_path:
        lines.append(f"counts: {run.counts_path}")
        lines.append(f"diagnostics: {run.diagnostics_path}")
    return "\n".join(lines)


def _threshold_rows(rows: List[ThresholdResult]) -> List[Dict[str, Any]]:
    return [
        {
            "n": row.n_parties,
            "p_star": row.visibility_threshold,
            "f_star": row.fidelity_threshold,
            "p_numeric": _number(row.visibility_numeric),
            "f_numeric": _number(row.fidelity_numeric),
            "note": FIDELITY_NOTE_N3 if row.n_parties == 3 else "",
        }
        for row in rows
    ]


def _reference(classical: ClassicalBoundResult, ideal: InequalityReport) -> Dict[str, Any]:
    return {
        "classical_max_f": _number(classical.max_f),
        "strategies": classical.evaluated,
        "undefined_strategies": classical.undefined,
        "optimal_strategies": len(classical.maximizers),
        "ideal_ghz3_f": _number(ideal.f_value),
        "quantum_max": Config.QUANTUM_MAX,
    }


def thresholds_document(
    rows: List[ThresholdResult], classical: ClassicalBoundResult, ideal: InequalityReport
) -> Dict[str, Any]:
    return {**_header("thresholds"), "reference": _reference(classical, ideal), "rows": _threshold_rows(rows)}


def thresholds_text(rows: List[ThresholdResult], classical: ClassicalBoundResult, ideal: InequalityReport) -> str:
    frame = pd.DataFrame(_threshold_rows(rows))
    return "\n".join([
        f"deterministic strategies: max F = {classical.max_f:.4f} over {classical.evaluated - classical.undefined} "
        f"({classical.undefined} undefined, {len(classical.maximizers)} optimal)",
        f"ideal GHZ3: F = {ideal.f_value:.4f}",
        "",
        frame.to_string(index=False, float_format=lambda v: f"{v:.9f}"),
    ])


def tomography_document(result: ReconstructionResult) -> Dict[str, Any]:
    rho = result.rho.density_matrix()
    return {
        **_header("tomo", result.seed),
        "mc_samples": result.mc_samples,
        "fidelity": _number(result.fidelity),
        "fidelity_sigma": _number(result.fidelity_sigma),
        "raw_min_eigenvalue": _number(result.raw_min_eigenvalue),
        "rho_real": rho.real.tolist(),
        "rho_imag": rho.imag.tolist(),
    }


def tomography_text(result: ReconstructionResult) -> str:
    return "\n".join([
        f"fidelity = {result.fidelity:.4f} ± {result.fidelity_sigma:.4f}",
        f"Monte Carlo samples: {result.mc_samples}, seed: {result.seed}",
        f"smallest raw eigenvalue: {result.raw_min_eigenvalue:.3e}",
    ])


def witness_document(report: WitnessReport) -> Dict[str, Any]:
    return {
        **_header("witness", report.seed),
        "fidelity": _number(report.fidelity),
        "sigma": _number(report.sigma),
        "mc_samples": report.mc_samples,
        "expectations": {key: _number(value) for key, value in report.expectations.items()},
    }


def witness_text(report: WitnessReport) -> str:
    frame = pd.DataFrame(sorted(report.expectations.items()), columns=["term", "value"])
    fidelity = f"fidelity = {report.fidelity:.4f}"
    if math.isfinite(report.sigma):
        fidelity += f" ± {report.sigma:.4f}"
    return "\n".join([fidelity, "", _table(frame)])


def spacetime_document(result: SpacetimeAudit) -> Dict[str, Any]:
    layout = result.layout
    return {
        **_header("spacetime"),
        "light_speed": layout.c,
        "uncertainty_mode": layout.uncertainty_mode,
        "basis_times": {
            name: {"value": value.value, "uncertainty": value.uncertainty}
            for name, value in result.basis_times.items()
        },
        "fibers": [
            {"a": a, "b": b, "length": layout.fibers[pair].value, "excess": excess.value, "uncertainty": excess.uncertainty}
            for pair, excess in result.fiber_excess.items()
            for a, b in [sorted(pair)]
        ],
        "closures": [
            {
                "detector": report.detector,
                "chooser": report.chooser,
                "margin": report.margin,
                "uncertainty": report.uncertainty,
                "passed": report.passed,
            }
            for report in result.closures
        ],
        "passed": result.passed,
    }


def spacetime_text(result: SpacetimeAudit) -> str:
    frame = pd.DataFrame(
        [
            (report.detector, report.chooser, report.margin, report.uncertainty, "pass" if report.passed else "FAIL")
            for report in result.closures
        ],
        columns=["detector", "chooser", "margin_ns", "uncertainty_ns", "result"],
    )
    times = ", ".join(f"{name} {value}" for name, value in result.basis_times.items())
    lines = [f"earliest basis choices (ns): {times}"]
    if result.fiber_excess:
        fibers = ", ".join(f"{'-'.join(sorted(pair))} {value}" for pair, value in result.fiber_excess.items())
        lines.append(f"fiber length over beeline (m): {fibers}")
    return "\n".join([
        *lines,
        "",
        frame.to_string(index=False, float_format=lambda v: f"{v:.1f}"),
        "",
        f"overall: {'PASS' if result.passed else 'FAIL'}",
    ])
