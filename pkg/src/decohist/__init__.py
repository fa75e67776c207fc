"""decohist: a finite-dimensional engine for consistent-histories quantum
mechanics.

Builds chain operators over time-indexed resolutions of the identity,
evaluates history probabilities and conditionals, assembles the decoherence
functional, checks consistency and additivity, and cross-validates everything
against an independent sequential-measurement oracle.
"""

from . import errors
from .consistency import (
    ConsistencyReport,
    check_additivity,
    check_medium_decoherence,
    check_state_robustness,
    check_weak_consistency,
)
from .dynamics import (
    DynamicsSchedule,
    DynamicsSpec,
    TimeGrid,
    build_schedule,
    heisenberg_projector,
    heisenberg_resolution,
    propagator,
)
from .histories import (
    DecoherenceFunctional,
    History,
    HistoryFamily,
    UndefinedUnion,
    chain_operator,
    coarsen_slot,
    decoherence_functional,
    fine_probabilities,
    history_intersection,
    history_probability,
    history_subset,
    history_union,
    predictive_conditional,
    retrodictive_conditional,
    retrodictive_normalized,
)
from .linalg import (
    DEFAULT_TOL,
    DensityState,
    Projector,
    adjoint,
    basis_projector,
    compose,
    make_projector,
    make_state,
    matrix_from_pairs,
    matrix_to_pairs,
    tensor,
    trace,
)
from .lueders import MeasurementTrace, conditional_via_oracle, sequential_probability
from .resolutions import (
    Outcome,
    Resolution,
    SpectralLabel,
    coarsen,
    from_basis,
    make_resolution,
    outcome_intersection,
    outcome_projector,
    outcome_subset,
    outcome_union,
)
from .scenario import Scenario, parse_scenario, run_query, serialize_scenario

__version__ = "0.1.0"

__all__ = [
    "ConsistencyReport",
    "DecoherenceFunctional",
    "DensityState",
    "DynamicsSchedule",
    "DynamicsSpec",
    "DEFAULT_TOL",
    "History",
    "HistoryFamily",
    "MeasurementTrace",
    "Outcome",
    "Projector",
    "Resolution",
    "Scenario",
    "SpectralLabel",
    "TimeGrid",
    "UndefinedUnion",
    "adjoint",
    "basis_projector",
    "build_schedule",
    "chain_operator",
    "check_additivity",
    "check_medium_decoherence",
    "check_state_robustness",
    "check_weak_consistency",
    "coarsen",
    "coarsen_slot",
    "compose",
    "conditional_via_oracle",
    "decoherence_functional",
    "errors",
    "fine_probabilities",
    "from_basis",
    "heisenberg_projector",
    "heisenberg_resolution",
    "history_intersection",
    "history_probability",
    "history_subset",
    "history_union",
    "make_projector",
    "make_resolution",
    "make_state",
    "matrix_from_pairs",
    "matrix_to_pairs",
    "outcome_intersection",
    "outcome_projector",
    "outcome_subset",
    "outcome_union",
    "parse_scenario",
    "predictive_conditional",
    "propagator",
    "retrodictive_conditional",
    "retrodictive_normalized",
    "run_query",
    "sequential_probability",
    "serialize_scenario",
    "tensor",
    "trace",
]
