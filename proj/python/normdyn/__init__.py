"""Finite-population dynamics of AI-use norms (Python bindings to the C++ core)."""

from ._core import (
    BaselineParams,
    DimensionError,
    DomainError,
    Error,
    ExtendedParams,
    GamePayoffs,
    InvalidChain,
    InvalidParameter,
    SolverError,
    SWEEP_CSV_HEADER,
    average_payoffs,
    baseline_matrix,
    derive_seed,
    extended_matrix,
    fermi_probability,
    find_threshold,
    fixation_probability,
    is_coordination,
    log_fixation_probability,
    reference_params,
    run_sweep,
    simulate,
    stationary,
    transition_rates,
)

STRATEGIES = ("RR", "RS", "O", "M")
BASELINE_STRATEGIES = ("R", "O")

__version__ = "0.1.0"
