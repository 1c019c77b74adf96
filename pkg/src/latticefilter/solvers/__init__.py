"""Solvers for the planted-instance problems the simulator supports.

Each solver takes explicit sample material (or an oracle that produces it),
returns a result object carrying the recovered secret together with usage
counters, and never reports an unverified answer: a candidate that fails
the promise checks comes back as a failure, not as a wrong vector.
"""

from .arora_ge import arora_ge, monomial_count
from .slwe import (
    LweSampleSet,
    SolverResult,
    StateOracle,
    make_lwe_instance,
    slwe_solve_ag,
    slwe_solve_ge,
)
from .sis import (
    SisInstance,
    sis_state_sample,
    sis_solve_composite,
    sis_solve_general,
    kernel_subsolver,
    verify_sis,
)
from .clwe import FidelityReport, clwe_simulate
from .edcp import (
    EdcpSample,
    EdcpSampleSet,
    edcp_sample_set,
    edcp_solve,
    edcp_to_slwe,
    reduced_state,
    friedl_constant_q,
    friedl_measurements,
)

__all__ = [
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
