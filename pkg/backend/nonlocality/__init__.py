from .exceptions import (
    NonlocalityException,
    InvalidState,
    DimensionMismatch,
    OptimizerDidNotConverge,
    SignalingDistribution,
    DegenerateSettings,
    NonUniqueSolution,
    VanishingSuccess,
    IdenticallyZeroPolynomial,
    IdenticallyZeroF,
    DegenerateX,
    SingularDenominator,
    NotEntangled,
    NumericalFailure,
)
from .qstate import (
    PureState,
    DensityMatrix,
    SymmetricState,
    Bipartition,
    all_bipartitions,
    dicke_expand,
    symmetric_part,
    apply_local_unitary,
    closest_product_state,
    to_magic_basis,
    haar_random_pure,
    haar_random_symmetric,
    schmidt_coefficients,
    genuine_entanglement_check,
)
from .measure import (
    Ray,
    MeasurementSettings,
    JointDistribution,
    rotate_settings,
    born_distribution,
    ns_residual,
    marginal,
)
from .hardy import (
    HardyReport,
    HardySubspace,
    hardy_conditions,
    inequality1,
    inequality2,
    construct_hardy_state,
    mixed_state_check,
)
from .symmetric import (
    CCoeffs,
    SymmetricSolution,
    c_coeffs,
    degenerate_x_roots,
    f_poly_roots,
    phase_pick,
    phase_diagnostics,
    solve_settings,
    ghz_closed_form,
    w_closed_form,
    solve_auto,
    scan_p_success,
)
from .polytope import (
    BoxVertex,
    ModelVertexSet,
    LPOutcome,
    Classification,
    deterministic_local_vertices,
    ns_bipartite_vertices,
    bilocal_ns_vertices,
    lp_membership,
    classify,
    chsh_value,
    verify_extremality,
    vertex_inequality_maxima,
)
from .search import (
    SearchConfig,
    SettingsFound,
    NoSettingsFound,
    ExperimentSummary,
    find_settings,
    random_experiment,
    hardy_two_qubit_optimum,
)

__all__ = [
    # Errors
    "NonlocalityException",
    "InvalidState",
    "DimensionMismatch",
    "OptimizerDidNotConverge",
    "SignalingDistribution",
    "DegenerateSettings",
    "NonUniqueSolution",
    "VanishingSuccess",
    "IdenticallyZeroPolynomial",
    "IdenticallyZeroF",
    "DegenerateX",
    "SingularDenominator",
    "NotEntangled",
    "NumericalFailure",
    # States
    "PureState",
    "DensityMatrix",
    "SymmetricState",
    "Bipartition",
    "all_bipartitions",
    "dicke_expand",
    "symmetric_part",
    "apply_local_unitary",
    "closest_product_state",
    "to_magic_basis",
    "haar_random_pure",
    "haar_random_symmetric",
    "schmidt_coefficients",
    "genuine_entanglement_check",
    # Measurements
    "Ray",
    "MeasurementSettings",
    "JointDistribution",
    "rotate_settings",
    "born_distribution",
    "ns_residual",
    "marginal",
    # Hardy test
    "HardyReport",
    "HardySubspace",
    "hardy_conditions",
    "inequality1",
    "inequality2",
    "construct_hardy_state",
    "mixed_state_check",
    # Symmetric solver
    "CCoeffs",
    "SymmetricSolution",
    "c_coeffs",
    "degenerate_x_roots",
    "f_poly_roots",
    "phase_pick",
    "phase_diagnostics",
    "solve_settings",
    "ghz_closed_form",
    "w_closed_form",
    "solve_auto",
    "scan_p_success",
    # Polytopes
    "BoxVertex",
    "ModelVertexSet",
    "LPOutcome",
    "Classification",
    "deterministic_local_vertices",
    "ns_bipartite_vertices",
    "bilocal_ns_vertices",
    "lp_membership",
    "classify",
    "chsh_value",
    "verify_extremality",
    "vertex_inequality_maxima",
    # Search
    "SearchConfig",
    "SettingsFound",
    "NoSettingsFound",
    "ExperimentSummary",
    "find_settings",
    "random_experiment",
    "hardy_two_qubit_optimum",
]
