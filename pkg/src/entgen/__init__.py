"""Entanglement generation over lossy optical links.

Closed-form performance bounds for pulse-mediated entanglement generation,
simulation of the nondemolition and photon-counting protocols that attain
them, a local-filtering envelope with a Monte Carlo falsifier, and an
independent truncated-Fock-space oracle that re-derives every closed form
from explicit operators.
"""

from .bound import ChannelSpec, VirtualReduction, c_opt, optimal_bound_curve, u_star, virtual_reduction
from .entanglement import (
    CONCURRENCE,
    EOF_MONOTONE,
    Monotone,
    PhaseFlipChannel,
    apply_phase_flip,
    concurrence_pure,
    concurrence_wootters,
    damping_factor,
    monotone,
    monotone_value,
    reduce_rank2_qubit_qudit,
)
from .filtering import (
    AuditReport,
    CurvePoint,
    FilterScenario,
    c_max,
    montecarlo_filter_audit,
    optimal_filter,
    upper_concave_envelope,
)
from .protocol import (
    BranchAmplitudes,
    OutcomeRecord,
    ProtocolParams,
    average_monotone,
    branch_amplitudes,
    calibrate_optimal,
    near_optimal_curve,
    optimize_near_optimal,
    outcome_concurrence,
    outcome_probability,
    qnd_concurrence,
    success_probability,
)

__all__ = [
    "AuditReport",
    "BranchAmplitudes",
    "CONCURRENCE",
    "ChannelSpec",
    "CurvePoint",
    "EOF_MONOTONE",
    "FilterScenario",
    "Monotone",
    "OutcomeRecord",
    "PhaseFlipChannel",
    "ProtocolParams",
    "VirtualReduction",
    "apply_phase_flip",
    "average_monotone",
    "branch_amplitudes",
    "c_max",
    "c_opt",
    "calibrate_optimal",
    "concurrence_pure",
    "concurrence_wootters",
    "damping_factor",
    "monotone",
    "monotone_value",
    "montecarlo_filter_audit",
    "near_optimal_curve",
    "optimal_bound_curve",
    "optimal_filter",
    "optimize_near_optimal",
    "outcome_concurrence",
    "outcome_probability",
    "qnd_concurrence",
    "reduce_rank2_qubit_qudit",
    "success_probability",
    "u_star",
    "upper_concave_envelope",
    "virtual_reduction",
]

__version__ = "0.1.0"
