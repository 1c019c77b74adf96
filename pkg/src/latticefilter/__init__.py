"""Filtering-based solvers for LWE with quantum state samples and relatives.

Everything runs on plain numpy at desk scale: amplitudes over Z_q, shift-column
geometry, filter unitaries, and the solver pipelines built from them.
"""

from .errors import (
    BadParameter,
    BadShape,
    CompositeModulus,
    DuplicateNodes,
    EmptySolutionSet,
    InsufficientSamples,
    LatticeFilterError,
    RankDeficient,
    ScaleExceeded,
    SingularGram,
    Timeout,
)
from .zq import (
    LinearSolution,
    Modulus,
    ZqMatrix,
    ZqVector,
    centered,
    is_prime,
    kernel_basis,
    rank,
    rref,
    solve_linear_system,
)
from .amplitudes import (
    FAMILIES,
    Amplitude,
    Eta,
    bounded_uniform_dft_closed_form,
    dft,
    dft_matrix,
    make_amplitude,
    min_abs_dft,
)
from .circulant import (
    EIGENVALUE_ZERO_RTOL,
    GSO_RANK_TOL,
    GsoResult,
    ShiftColumnSet,
    build_shift_columns,
    circulant_eigenvalues,
    dual_last_column_norm,
    gso,
    gso_last_norm_bound,
    sine_product_check,
    vandermonde_inverse_last_column,
)
from .filtering import (
    ANOMALY_MASS_TOL,
    Equality,
    ExcludedSet,
    FilterUnitary,
    NoInformation,
    StateVector,
    build_filter_unitary,
    constraint_from_outcome,
    family_full_rank,
    outcome_distribution,
    psi_state,
    sample_outcome,
)
from .seeding import child_seeds, stream
from .solvers import (
    EdcpSample,
    EdcpSampleSet,
    FidelityReport,
    LweSampleSet,
    SisInstance,
    SolverResult,
    StateOracle,
    arora_ge,
    clwe_simulate,
    edcp_sample_set,
    edcp_solve,
    edcp_to_slwe,
    friedl_constant_q,
    friedl_measurements,
    kernel_subsolver,
    make_lwe_instance,
    monomial_count,
    reduced_state,
    sis_solve_composite,
    sis_solve_general,
    sis_state_sample,
    slwe_solve_ag,
    slwe_solve_ge,
    verify_sis,
)

__all__ = [
    "LatticeFilterError",
    "BadParameter",
    "BadShape",
    "CompositeModulus",
    "DuplicateNodes",
    "EmptySolutionSet",
    "InsufficientSamples",
    "RankDeficient",
    "ScaleExceeded",
    "SingularGram",
    "Timeout",
    "Modulus",
    "ZqVector",
    "ZqMatrix",
    "LinearSolution",
    "centered",
    "is_prime",
    "rref",
    "rank",
    "solve_linear_system",
    "kernel_basis",
    "FAMILIES",
    "Amplitude",
    "Eta",
    "make_amplitude",
    "dft",
    "dft_matrix",
    "bounded_uniform_dft_closed_form",
    "min_abs_dft",
    "GSO_RANK_TOL",
    "EIGENVALUE_ZERO_RTOL",
    "ShiftColumnSet",
    "GsoResult",
    "build_shift_columns",
    "gso",
    "circulant_eigenvalues",
    "gso_last_norm_bound",
    "dual_last_column_norm",
    "vandermonde_inverse_last_column",
    "sine_product_check",
    "ANOMALY_MASS_TOL",
    "StateVector",
    "FilterUnitary",
    "Equality",
    "ExcludedSet",
    "NoInformation",
    "psi_state",
    "family_full_rank",
    "build_filter_unitary",
    "outcome_distribution",
    "sample_outcome",
    "constraint_from_outcome",
    "stream",
    "child_seeds",
    "arora_ge",
    "monomial_count",
    "LweSampleSet",
    "SolverResult",
    "StateOracle",
    "make_lwe_instance",
    "slwe_solve_ag",
    "slwe_solve_ge",
    "SisInstance",
    "sis_state_sample",
    "sis_solve_composite",
    "sis_solve_general",
    "kernel_subsolver",
    "verify_sis",
    "FidelityReport",
    "clwe_simulate",
    "EdcpSample",
    "EdcpSampleSet",
    "edcp_sample_set",
    "edcp_solve",
    "edcp_to_slwe",
    "reduced_state",
    "friedl_constant_q",
    "friedl_measurements",
]
