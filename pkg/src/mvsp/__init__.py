"""Quantum state preparation for multivariate functions via series expansions.

Pipeline: approximate a target with a Fourier or Chebyshev series, lower the
series to a linear-combination-of-unitaries circuit over dyadic grids, then
simulate, post-select, and verify against the target.
"""

from .errors import (
    InvalidArgumentError,
    MvspError,
    NumericDomainError,
    ResourceLimitError,
)
from .grids import SYMMETRIC, UNIT, GridSpec, grid_operator_diag, grid_points
from .series import (
    CHEBYSHEV,
    FOURIER,
    SeriesApprox,
    TargetFunction,
    chebyshev_interpolate,
    chebyshev_nodes,
    evaluate_series,
    evaluate_series_on_axes,
    evaluate_series_on_grid,
    fourier_interpolate,
    gaussian_fourier_coeffs,
    mirror_extend,
)
from .circuit import Circuit, Gate, Register, count_gates, to_unitary
from .synthesis import (
    DimensionPlan,
    LcuPlan,
    assemble_lcu,
    assemble_state_prep,
    build_chebyshev_UV,
    build_coefficient_loader,
    build_controlled_powers,
    build_fourier_B,
    plan_from_series,
    resource_report,
)
from .simulator import (
    PreparationOutcome,
    StateVector,
    postselect_circuit,
    postselect_zero_ancillas,
    run,
    sample_shots,
)
from .verify import (
    BandwidthScan,
    asymptotic_success_probability,
    classical_fidelity,
    density_moments,
    kde_cv_bandwidth,
    kde_estimate,
    max_grid_error,
    success_probability_analytic,
)
from .physics import (
    PlaneWaveProblem,
    coulomb_series,
    gaussian2d,
    planewave_state,
    planewave_target,
    ricker2d,
    solve_coulomb_planewaves,
    student_t2d,
)

__all__ = [
    "CHEBYSHEV",
    "FOURIER",
    "SYMMETRIC",
    "UNIT",
    "BandwidthScan",
    "Circuit",
    "DimensionPlan",
    "Gate",
    "GridSpec",
    "InvalidArgumentError",
    "LcuPlan",
    "MvspError",
    "NumericDomainError",
    "PlaneWaveProblem",
    "PreparationOutcome",
    "Register",
    "ResourceLimitError",
    "SeriesApprox",
    "StateVector",
    "TargetFunction",
    "assemble_lcu",
    "assemble_state_prep",
    "asymptotic_success_probability",
    "build_chebyshev_UV",
    "build_coefficient_loader",
    "build_controlled_powers",
    "build_fourier_B",
    "chebyshev_interpolate",
    "chebyshev_nodes",
    "classical_fidelity",
    "coulomb_series",
    "count_gates",
    "density_moments",
    "evaluate_series",
    "evaluate_series_on_axes",
    "evaluate_series_on_grid",
    "fourier_interpolate",
    "gaussian2d",
    "gaussian_fourier_coeffs",
    "grid_operator_diag",
    "grid_points",
    "kde_cv_bandwidth",
    "kde_estimate",
    "max_grid_error",
    "mirror_extend",
    "plan_from_series",
    "planewave_state",
    "planewave_target",
    "postselect_circuit",
    "postselect_zero_ancillas",
    "resource_report",
    "ricker2d",
    "run",
    "sample_shots",
    "solve_coulomb_planewaves",
    "student_t2d",
    "success_probability_analytic",
    "to_unitary",
    "__version__",
]

__version__ = "0.1.0"
