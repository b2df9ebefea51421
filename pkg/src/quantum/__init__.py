"""Exact finite-dimensional quantum mechanics on qubit registers."""

from .states import (
    QuantumState,
    fidelity_with_pure,
    ghz_state,
    mix_white_noise,
    product_state,
    project_party,
)
from .measurement import (
    DichotomicObservable,
    MeasurementLayout,
    ProbabilityTable,
    expectation,
    n_party_layout,
    outcome_labels,
    outcome_probabilities,
    ghz3_layout,
    required_settings,
)

__all__ = [
    "QuantumState",
    "fidelity_with_pure",
    "ghz_state",
    "mix_white_noise",
    "product_state",
    "project_party",
    "DichotomicObservable",
    "MeasurementLayout",
    "ProbabilityTable",
    "expectation",
    "n_party_layout",
    "outcome_labels",
    "outcome_probabilities",
    "ghz3_layout",
    "required_settings",
]
