"""
Jones-calculus model of the single-photon polarization modulator (SPPM).

The SPPM is a quarter-wave plate at -45 degrees, an electro-optic phase stage
that delays the V component by phi, and a quarter-wave plate at +45 degrees.
Analysing the output in the H/V basis measures U^dagger Z U, which for this
chain equals cos(phi) Z + sin(phi) X.

Convention: a wave plate with fast axis at theta is R(-theta) D R(theta) with
R(theta) = [[cos, sin], [-sin, cos]]; H is the +1 eigenstate of Z.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import Config
from ..quantum.measurement import (
    STANDARD_OBSERVABLES,
    DichotomicObservable,
    MeasurementLayout,
    PAULI_Z,
)
from ..utils.errors import DomainError
from ..utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True, eq=False)
class JonesMatrix:
    """Lossless 2x2 polarization element."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (2, 2) or not np.all(np.isfinite(matrix)):
            raise DomainError(f"Jones matrix {self.label!r} must be a finite 2x2 matrix")
        if np.max(np.abs(matrix.conj().T @ matrix - np.eye(2))) > Config.EIGEN_TOLERANCE:
            raise DomainError(f"Jones matrix {self.label!r} is not unitary")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def __matmul__(self, other: "JonesMatrix") -> "JonesMatrix":
        return JonesMatrix(self.matrix @ other.matrix, f"{self.label}·{other.label}")

    def equals_up_to_phase(self, other: "JonesMatrix", tolerance: float = 1e-10) -> bool:
        overlap = np.trace(other.matrix.conj().T @ self.matrix)
        if abs(overlap) < tolerance:
            return False
        phase = overlap / abs(overlap)
        return bool(np.max(np.abs(self.matrix - phase * other.matrix)) <= tolerance)


@dataclass(frozen=True)
class SppmSetting:
    """Wave-plate angles and modulator phase, all in radians."""

    phase: float
    qwp1_angle: float = -np.pi / 4
    qwp2_angle: float = np.pi / 4

    def __post_init__(self):
        for name in ("phase", "qwp1_angle", "qwp2_angle"):
            if not np.isfinite(getattr(self, name)):
                raise DomainError(f"SPPM {name} must be finite")


def _check_angle(value: float, name: str) -> None:
    if not np.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=complex)


def qwp(theta: float) -> JonesMatrix:
    """Quarter-wave plate with fast axis at theta from horizontal."""
    _check_angle(theta, "theta")
    retarder = np.diag([1.0, 1j])
    return JonesMatrix(_rotation(-theta) @ retarder @ _rotation(theta), f"QWP({np.degrees(theta):.6g}°)")


def hwp(theta: float) -> JonesMatrix:
    """Half-wave plate with fast axis at theta from horizontal."""
    _check_angle(theta, "theta")
    retarder = np.diag([1.0, -1.0])
    return JonesMatrix(_rotation(-theta) @ retarder @ _rotation(theta), f"HWP({np.degrees(theta):.6g}°)")


def eopm(phi: float) -> JonesMatrix:
    """Phase stage P(phi) = diag(1, e^{i phi})."""
    _check_angle(phi, "phi")
    return JonesMatrix(np.diag([1.0, np.exp(1j * phi)]), f"P({phi:.6g})")


def sppm(phi: float) -> JonesMatrix:
    """Closed form of the modulator: i e^{i phi/2} [[cos, sin], [-sin, cos]](phi/2)."""
    _check_angle(phi, "phi")
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    matrix = 1j * np.exp(1j * phi / 2) * np.array([[c, s], [-s, c]])
    return JonesMatrix(matrix, f"M({phi:.6g})")


def chain_matrix(setting: SppmSetting) -> JonesMatrix:
    """Light passes the first plate, the phase stage, then the second plate."""
    return qwp(setting.qwp2_angle) @ eopm(setting.phase) @ qwp(setting.qwp1_angle)


def _nearest_label(matrix: np.ndarray) -> Optional[str]:
    for label, observable in STANDARD_OBSERVABLES.items():
        if np.max(np.abs(matrix - observable.matrix)) <= Config.PROBABILITY_TOLERANCE:
            return label
    return None


def observable_for_chain(chain: JonesMatrix) -> DichotomicObservable:
    """U^dagger Z U for the chain U followed by H/V analysis."""
    unitary = chain.matrix
    matrix = unitary.conj().T @ PAULI_Z @ unitary
    matrix = (matrix + matrix.conj().T) / 2
    label = _nearest_label(matrix)
    if label is None:
        z = matrix[0, 0].real
        x = matrix[0, 1].real
        y = -matrix[0, 1].imag
        label = f"{z:+.4f}Z{x:+.4f}X{y:+.4f}Y"
    return DichotomicObservable(matrix, label)


def effective_observable(setting: SppmSetting) -> DichotomicObservable:
    """Observable measured by an SPPM setting followed by H/V detection."""
    return observable_for_chain(chain_matrix(setting))


def basis_choice_fidelity(c_right: int, c_wrong: int) -> float:
    """F_m = C_r / (C_r + C_w) from detector counts."""
    for name, value in (("c_right", c_right), ("c_wrong", c_wrong)):
        if not isinstance(value, (int, np.integer)) or value < 0:
            raise DomainError(f"{name} must be a nonnegative integer, got {value!r}")
    total = c_right + c_wrong
    if total == 0:
        raise DomainError("basis-choice fidelity is undefined without counts")
    return c_right / total


# Phase settings per observer: (input, phase, observable label, reported F_m)
SPPM_SETTINGS: Dict[str, List[Tuple[int, float, str, float]]] = {
    "Alice": [(0, 0.0, "Z", 0.9923), (1, np.pi / 2, "X", 0.9910)],
    "Bob": [
        (0, np.pi / 4, "(Z+X)/√2", 0.9889),
        (1, -np.pi / 4, "(Z-X)/√2", 0.9917),
        (2, 0.0, "Z", 0.9945),
    ],
    "Charlie": [(0, 0.0, "Z", 0.9934), (1, np.pi / 2, "X", 0.9917)],
}


def sppm_layout() -> MeasurementLayout:
    """Measurement layout realised by the modulator phase settings."""
    parties = []
    for observer in ("Alice", "Bob", "Charlie"):
        rows = sorted(SPPM_SETTINGS[observer])
        parties.append(tuple(effective_observable(SppmSetting(phase=phase)) for _, phase, _, _ in rows))
    logger.debug("sppm_layout: built from modulator phases")
    return MeasurementLayout(tuple(parties))
