"""Deformation quantization of the torus and its classical limit, desk scale."""

from .lattice import (
    DEFAULT_MODE_CAP,
    PRUNE_TOL,
    FourierElement,
    SeminormReport,
    add,
    involution,
    partial_derivative,
    pointwise_mul,
    seminorm,
)
from .deform import (
    PlanckParam,
    SymplecticStructure,
    cocycle,
    commutator,
    deformed_mul,
    one_sided_residual,
    poisson_bracket,
    scaled_commutator_residual,
)
from .cstar import (
    NormEstimate,
    build_left_multiplication,
    default_window,
    l1_upper,
    l2_lower,
    op_norm_estimate,
)
from .flow import (
    FlowResult,
    LipschitzReport,
    PullbackResult,
    VectorField,
    delta_phi,
    flow_points,
    gronwall_bound,
    hamiltonian_vector_field,
    lipschitz_check,
    pullback,
    torus_distance,
)
from .quantum import (
    EvolutionResult,
    QuantumHamiltonian,
    conjugation_evolve,
    exp_deformed,
    heisenberg_evolve,
    isometry_defect,
    unitary_propagator,
)
from .harness import (
    ErrorRecord,
    ExperimentConfig,
    FitResult,
    ScanResult,
    commutator_limit_scan,
    egorov_error,
    fit_order,
    scan,
)
from . import errors

__all__ = [
    "DEFAULT_MODE_CAP",
    "PRUNE_TOL",
    "FourierElement",
    "SeminormReport",
    "add",
    "involution",
    "partial_derivative",
    "pointwise_mul",
    "seminorm",
    "PlanckParam",
    "SymplecticStructure",
    "cocycle",
    "commutator",
    "deformed_mul",
    "one_sided_residual",
    "poisson_bracket",
    "scaled_commutator_residual",
    "NormEstimate",
    "build_left_multiplication",
    "default_window",
    "l1_upper",
    "l2_lower",
    "op_norm_estimate",
    "FlowResult",
    "LipschitzReport",
    "PullbackResult",
    "VectorField",
    "delta_phi",
    "flow_points",
    "gronwall_bound",
    "hamiltonian_vector_field",
    "lipschitz_check",
    "pullback",
    "torus_distance",
    "EvolutionResult",
    "QuantumHamiltonian",
    "conjugation_evolve",
    "exp_deformed",
    "heisenberg_evolve",
    "isometry_defect",
    "unitary_propagator",
    "ErrorRecord",
    "ExperimentConfig",
    "FitResult",
    "ScanResult",
    "commutator_limit_scan",
    "egorov_error",
    "fit_order",
    "scan",
    "errors",
]

__version__ = "0.1.0"
