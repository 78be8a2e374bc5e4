"""Spatial AK growth control on the circle.

A numpy/scipy library that assembles the diffusion-plus-technology generator
on a periodic grid, computes its spectral data, builds the closed-form value
function and optimal feedback of the discounted consumption problem,
simulates the closed-loop integro-PDE, and numerically certifies
convergence, positivity admissibility, and optimality.
"""

from .closed_loop import (
    ClosedLoopOperator,
    ContourProjection,
    ProjectionData,
    Trajectory,
    build_closed_loop,
    compute_projection_data,
    projection_apply,
    projection_matrix,
    projection_via_contour,
    simulate,
    withdrawal_profile,
)
from .errors import (
    ConfigError,
    ContourEnclosureError,
    GridMismatchError,
    HalfSpaceError,
    InfeasibleParametersError,
    PerronViolationError,
    PositivityError,
    SpectrumCollisionError,
    TailDivergenceError,
    UnderflowWarning,
)
from .grid import (
    Grid,
    GridFunction,
    inner_l2,
    integral,
    is_strictly_positive,
    sup_norm,
)
from .hjb import (
    HjbSolution,
    check_wellposed,
    compute_alpha,
    feedback_control,
    growth_rate,
    hamiltonian,
    hjb_summary,
    optimal_control_path,
    solve_hjb,
    utility,
    value_function,
)
from .perron import (
    BoundarySpectrum,
    GeneratorMatrix,
    PerronData,
    boundary_spectrum,
    eigenvalues_admitting_positive_eigenvector,
    is_irreducible,
    perron_data,
    random_irreducible_metzler,
)
from .spectral import (
    ModelParams,
    OperatorMatrix,
    SpectralBasis,
    assemble_generator,
    eigendecompose,
    fourier_second_derivative,
    resolvent_apply,
    semigroup_apply,
)
from .stability import (
    StabilityReport,
    admissibility_condition,
    convergence_bound_check,
    dominance_window,
    explicit_bound_constant,
    positivity_audit,
)
from .tolerances import DEFAULT_TOLERANCES, Tolerances
from .verify import (
    OptimalityAudit,
    PayoffResult,
    closed_form_tail,
    default_horizon,
    hjb_residual,
    open_loop_trajectory,
    optimality_audit,
    payoff,
    perturbed_transversality_envelope,
    sample_halfspace_states,
    transversality_check,
)

__version__ = "0.1.0"
