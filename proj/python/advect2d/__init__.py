"""2D upwind finite-volume solver for linear advection with divergence-free
velocity fields, with the discrete energy/weak-form analysis toolbox."""

from ._core import (
    BoundaryKind,
    Box,
    CflResult,
    ConfigError,
    EnergyReport,
    GridFunction,
    InitialData,
    Mesh,
    RegularityReport,
    RunDiagnostics,
    RunResult,
    SchemeConfig,
    StepLedgerRow,
    VelocityField,
    build_cartesian,
    build_perturbed_cartesian,
    cfl_timestep,
    converge_study_file,
    discrete_total_variation,
    estimate_eoc,
    exact_solution_at,
    jacobian_check,
    l1_error,
    l1_norm,
    l2_norm_squared,
    layer_cake_decompose,
    mass,
    project_initial,
    read_mesh,
    run_experiment_file,
    run_steps,
    run_to_time,
    validate_mesh,
)

__all__ = [
    "BoundaryKind",
    "Box",
    "CflResult",
    "ConfigError",
    "EnergyReport",
    "GridFunction",
    "InitialData",
    "Mesh",
    "RegularityReport",
    "RunDiagnostics",
    "RunResult",
    "SchemeConfig",
    "StepLedgerRow",
    "VelocityField",
    "build_cartesian",
    "build_perturbed_cartesian",
    "cfl_timestep",
    "converge_study_file",
    "discrete_total_variation",
    "estimate_eoc",
    "exact_solution_at",
    "jacobian_check",
    "l1_error",
    "l1_norm",
    "l2_norm_squared",
    "layer_cake_decompose",
    "mass",
    "project_initial",
    "read_mesh",
    "run_experiment_file",
    "run_steps",
    "run_to_time",
    "validate_mesh",
]

__version__ = "0.1.0"
