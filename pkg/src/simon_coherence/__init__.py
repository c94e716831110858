"""Stage-by-stage coherence analysis of Simon's hidden-mask circuit.

Simulates the two-register circuit (Hadamard layer, reversible oracle,
Hadamard layer), evaluates five coherence quantifiers on every intermediate
state by independent routes, checks the dimension-only closed forms for the
two superposition stages, and recovers the hidden mask from measurement
samples with GF(2) elimination.
"""

from .closed_forms import (
    REGIME_DEPLETION,
    REGIME_NEUTRAL,
    REGIME_PANEL,
    REGIME_PRODUCTION,
    RegimeVerdict,
    classify_regime,
    coherence_delta,
    final_stage_coherence,
    final_stage_l1_candidates,
    hadamard_stage_coherence,
    uniform_superposition_coherence,
)
from .measures import (
    DEFAULT_PANEL,
    L1,
    METHOD_CLOSED,
    METHOD_DENSE,
    METHOD_PURE,
    REL_ENTROPY,
    SKEW_INFO,
    CoherenceMeasure,
    CoherenceValue,
    dense_coherence,
    l1_coherence,
    l1p,
    l1p_coherence,
    lqp_norm,
    pure_state_coherence,
    relative_entropy_coherence,
    skew_information_coherence,
    tsallis,
    tsallis_coherence,
)
from .recovery import Gf2System, RecoveryReport, add_constraint, recover, solve_nullspace
from .simon import (
    FunctionTableError,
    SimonFunction,
    Stage,
    bits_to_int,
    dot_mod2,
    format_function_table,
    int_to_bits,
    measure_second_register,
    oracle_apply,
    parse_function_table,
    random_bijection,
    random_two_to_one,
    run_stages,
    validate_function,
)
from .states import (
    EigenSystem,
    StateVector,
    basis_state,
    density_of,
    dephase,
    first_register_distribution,
    hadamard_first_register,
    hermitian_eig,
    matrix_power,
    purity,
    second_register_distribution,
    tensor,
    validate_density_matrix,
)
from .tolerances import TOL, Tolerances

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "Tolerances",
    "StateVector",
    "EigenSystem",
    "basis_state",
    "tensor",
    "hadamard_first_register",
    "density_of",
    "dephase",
    "purity",
    "hermitian_eig",
    "matrix_power",
    "first_register_distribution",
    "second_register_distribution",
    "validate_density_matrix",
    "Stage",
    "SimonFunction",
    "FunctionTableError",
    "bits_to_int",
    "int_to_bits",
    "dot_mod2",
    "random_two_to_one",
    "random_bijection",
    "validate_function",
    "oracle_apply",
    "run_stages",
    "measure_second_register",
    "format_function_table",
    "parse_function_table",
    "CoherenceMeasure",
    "CoherenceValue",
    "tsallis",
    "l1p",
    "REL_ENTROPY",
    "SKEW_INFO",
    "L1",
    "DEFAULT_PANEL",
    "METHOD_DENSE",
    "METHOD_PURE",
    "METHOD_CLOSED",
    "lqp_norm",
    "tsallis_coherence",
    "l1p_coherence",
    "relative_entropy_coherence",
    "skew_information_coherence",
    "l1_coherence",
    "dense_coherence",
    "pure_state_coherence",
    "REGIME_PANEL",
    "REGIME_PRODUCTION",
    "REGIME_NEUTRAL",
    "REGIME_DEPLETION",
    "RegimeVerdict",
    "uniform_superposition_coherence",
    "hadamard_stage_coherence",
    "final_stage_coherence",
    "final_stage_l1_candidates",
    "coherence_delta",
    "classify_regime",
    "Gf2System",
    "RecoveryReport",
    "add_constraint",
    "solve_nullspace",
    "recover",
]
