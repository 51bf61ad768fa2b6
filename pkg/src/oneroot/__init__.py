"""Entanglement of rank-2 mixed states under degree-2 polynomial measures.

The package certifies the one-root property of a state's range (the zero
polynomial of the measure over the span has a single root cluster), turns a
granted certificate into the exact convex roof via the distance law, and
cross-checks everything with a brute-force roof optimizer that knows nothing
about roots.
"""

from .convexroof import (
    Decomposition,
    OptimizerConfig,
    OracleStats,
    RoofResult,
    average_over_decomposition,
    closed_form,
    decomposition_objective,
    fd_gradient_norm,
    oracle_minimize,
    random_decomposition,
    sample_sphere_identity_instance,
    verify_sphere_identity,
    wootters_mixed_concurrence,
)
from .errors import OneRootError
from .families import (
    ScanRow,
    SloccClass,
    ThreeQubitFamily,
    TwoQubitFamily,
    generator,
    random_slocc,
    random_three_qubit_family,
    random_two_qubit_family,
    scan_classes,
    scan_table_verdict,
    slocc_class,
    slocc_marginal,
    sqrt_tangle_formula,
    three_qubit_family,
    three_qubit_state,
    two_qubit_concurrence,
    two_qubit_state,
)
from .measures import (
    CONCURRENCE,
    SQRT_THREE_TANGLE,
    MeasureDescriptor,
    apply_slocc,
    concurrence,
    get_measure,
    slocc_operator,
    sqrt_three_tangle,
    three_tangle,
)
from .qstate import (
    BlochVector,
    DensityMatrix,
    PureState,
    RankTwoState,
    bloch_vector,
    density_matrix,
    eigen_decompose_rank2,
    ket,
    make_rank_two,
    partial_trace,
    pure_state,
    trace_distance,
)
from .tolerances import TOL
from .zeropolytope import (
    RootCertificate,
    ZeroPolynomial,
    build_polynomial,
    certify,
    find_roots,
    pole_safe_basis,
    root_direction,
)

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "OneRootError",
    "BlochVector",
    "DensityMatrix",
    "PureState",
    "RankTwoState",
    "bloch_vector",
    "density_matrix",
    "eigen_decompose_rank2",
    "ket",
    "make_rank_two",
    "partial_trace",
    "pure_state",
    "trace_distance",
    "CONCURRENCE",
    "SQRT_THREE_TANGLE",
    "MeasureDescriptor",
    "apply_slocc",
    "concurrence",
    "get_measure",
    "slocc_operator",
    "sqrt_three_tangle",
    "three_tangle",
    "RootCertificate",
    "ZeroPolynomial",
    "build_polynomial",
    "certify",
    "find_roots",
    "pole_safe_basis",
    "root_direction",
    "Decomposition",
    "OptimizerConfig",
    "OracleStats",
    "RoofResult",
    "average_over_decomposition",
    "closed_form",
    "decomposition_objective",
    "fd_gradient_norm",
    "oracle_minimize",
    "random_decomposition",
    "sample_sphere_identity_instance",
    "verify_sphere_identity",
    "wootters_mixed_concurrence",
    "ScanRow",
    "SloccClass",
    "ThreeQubitFamily",
    "TwoQubitFamily",
    "generator",
    "random_slocc",
    "random_three_qubit_family",
    "random_two_qubit_family",
    "scan_classes",
    "scan_table_verdict",
    "slocc_class",
    "slocc_marginal",
    "sqrt_tangle_formula",
    "three_qubit_family",
    "three_qubit_state",
    "two_qubit_concurrence",
    "two_qubit_state",
]
