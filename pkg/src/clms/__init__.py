"""Constrained LMS adaptive filtering: algorithm, closed-form mean-square
performance predictions, and a seeded Monte Carlo validation harness."""

from .errors import (
    ArgumentError,
    ClmsError,
    ConfigError,
    DataError,
    DefinitenessError,
    EnsembleError,
    InstabilityError,
    ShapeError,
    SingularMatrixError,
    SpecValidationError,
    SymmetryError,
    ValidityDomainError,
)
from .filtering import (
    DIVERGENCE_LIMIT,
    FilterRun,
    FilterState,
    Sample,
    clms_step,
    deviation_step,
    init_state,
    run_filter,
)
from .linalg import kron, lin_solve, spd_sqrt, spectral_radius, sym_eig, unvec, vec_of
from .montecarlo import (
    EnsembleStats,
    RunConfig,
    RunResult,
    ensemble_msd_curve,
    run_streams,
    sample_input,
    simulate_run,
)
from .scenario import (
    DerivedModel,
    SystemSpec,
    Violation,
    derive_model,
    random_scenario,
    validate_spec,
)
from .theory import (
    TheoryPrediction,
    build_F,
    fourth_moment,
    iterations_to_steady_state,
    minimum_mse,
    misadjustment_bounds,
    misadjustment_direct,
    misadjustment_eigen,
    predict,
    recursion_eigenvalues,
    stability_max_step,
    steady_state_msd,
    transient_msd_curve,
)

__version__ = "0.1.0"
