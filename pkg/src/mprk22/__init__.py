"""Positivity-preserving MPRK22 integrators and their stability analysis."""

from ._backend import BACKEND
from .errors import (
    BracketFailure,
    ConfigError,
    DegenerateSteadyState,
    DomainError,
    IntegrationError,
    MprkError,
    NonPositiveInput,
    NotASteadyState,
    NotConservative,
    NumericalBreakdown,
    SignPatternViolation,
    SingularSystem,
)
from .integrators import (
    SchemeParams,
    StageVariant,
    StepResult,
    Trajectory,
    integrate,
    integrate_linear_2x2,
    mprk22_step,
    mprk22_step_linear,
)
from .linear2d import (
    Linear2x2PDS,
    MapEvaluation,
    degenerate_amplification,
    exact_solution,
    jacobian_at_steady_state,
    stage_matrix,
    steady_state,
    step_map,
    step_matrix,
    step_matrix_inverse,
)
from .pds import (
    ProductionSystem,
    production_split,
    total_mass,
    validate_linear_pds,
)
from .stability import (
    RegionRaster,
    ScaledStepPoint,
    StabilityVerdict,
    classify,
    critical_time_step,
    eigenvalues_2x2,
    finite_difference_jacobian,
    r_cs,
    r_ncs,
    raster_region,
    region_boundary,
    spectral_check,
    stability_function,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BracketFailure",
    "ConfigError",
    "DegenerateSteadyState",
    "DomainError",
    "IntegrationError",
    "Linear2x2PDS",
    "MapEvaluation",
    "MprkError",
    "NonPositiveInput",
    "NotASteadyState",
    "NotConservative",
    "NumericalBreakdown",
    "ProductionSystem",
    "RegionRaster",
    "ScaledStepPoint",
    "SchemeParams",
    "SignPatternViolation",
    "SingularSystem",
    "StabilityVerdict",
    "StageVariant",
    "StepResult",
    "Trajectory",
    "classify",
    "critical_time_step",
    "degenerate_amplification",
    "eigenvalues_2x2",
    "exact_solution",
    "finite_difference_jacobian",
    "integrate",
    "integrate_linear_2x2",
    "jacobian_at_steady_state",
    "mprk22_step",
    "mprk22_step_linear",
    "production_split",
    "r_cs",
    "r_ncs",
    "raster_region",
    "region_boundary",
    "spectral_check",
    "stability_function",
    "stage_matrix",
    "steady_state",
    "step_map",
    "step_matrix",
    "step_matrix_inverse",
    "total_mass",
    "validate_linear_pds",
    "__version__",
]
