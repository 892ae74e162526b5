"""Numerical checks of shock stability for scalar convex conservation laws."""

from shockstab.convex_calculus import (
    BoundsBox,
    FluxEntropyPair,
    bounds_on_box,
    make_pair,
    monotone_gap,
    normalized_flux,
    normalized_flux_grad,
    rel_entropy,
    rel_entropy_flux,
)
from shockstab.entropy_monitor import (
    EntropyLedger,
    StabilityReport,
    dissipation_constant,
    inner_relative_entropy,
    kappa_containment,
    shift_bound_lambda,
    stability_report,
    total_relative_entropy,
)
from shockstab.errors import (
    CertificationError,
    ConfigurationError,
    HypothesisViolation,
    InputError,
    InternalError,
    QuadratureError,
    ResourceError,
)
from shockstab.scalar_solver import (
    Evolution,
    Front,
    PiecewiseConstantProfile,
    Scenario,
    evolve,
    godunov_reference,
    solve_riemann,
    solve_scenario,
)
from shockstab.shift_tracker import (
    ShiftCurve,
    ShiftPair,
    filippov_speed,
    integrate_shift,
    track_shift_pair,
    uniqueness_probe,
)

__all__ = [
    "BoundsBox", "CertificationError", "ConfigurationError", "EntropyLedger", "Evolution",
    "FluxEntropyPair", "Front", "HypothesisViolation", "InputError", "InternalError",
    "PiecewiseConstantProfile", "QuadratureError", "ResourceError", "Scenario", "ShiftCurve",
    "ShiftPair", "StabilityReport", "bounds_on_box", "dissipation_constant", "evolve",
    "filippov_speed", "godunov_reference", "inner_relative_entropy", "integrate_shift",
    "kappa_containment", "make_pair", "monotone_gap", "normalized_flux", "normalized_flux_grad",
    "rel_entropy", "rel_entropy_flux", "shift_bound_lambda", "solve_riemann", "solve_scenario",
    "stability_report", "total_relative_entropy", "track_shift_pair", "uniqueness_probe",
]
