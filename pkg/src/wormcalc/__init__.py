"""Worm calculus toolkit.

Exact Cantor-normal-form ordinal arithmetic below epsilon-zero, worms
and their order values, strictly positive modal formulas with
demotion/promotion, a reflection-calculus style derivability prover,
and a verification harness for the reduction-property family of
conservativity theorems.
"""

from .ordinal import (
    Comparison,
    NotLimit,
    NotationOverflow,
    OMEGA,
    ONE,
    Ordinal,
    ParseError,
    Underflow,
    ZERO,
    add,
    as_ordinal,
    compare,
    fundamental_sequence,
    hyper_e,
    is_limit,
    left_subtract,
    omega_power,
    parse_ordinal,
    print_ordinal,
)
from .worm import (
    BelowShift,
    EmptyWorm,
    NoZero,
    TransfiniteModality,
    Worm,
    WormComparison,
    compare_worms,
    head,
    min_modality,
    ordinal_value,
    ordinal_value_gamma,
    parse_worm,
    print_worm,
    shift_down,
    shift_up,
    split_at_first_min_zero,
)
from .formula import (
    And,
    Bottom,
    Box,
    Diamond,
    Formula,
    Implies,
    Not,
    Or,
    Renaming,
    Top,
    UnmappedModality,
    Var,
    boxed_relativize,
    demote,
    is_strictly_positive,
    mod_set,
    parse_formula,
    print_formula,
    promote,
    q_formula,
    q_iter,
    worm_to_formula,
)
from .rc import (
    EquivalenceResult,
    NotStrictlyPositive,
    ProofResult,
    Prover,
    ResourceExhausted,
    Sequent,
    TraceNode,
    parse_sequent,
    prove,
    prove_equiv,
    trace_from_json,
    trace_to_json,
    validate_trace,
)
from .reduction import (
    BadBounds,
    CofinalFamily,
    Instance,
    Report,
    Universe,
    check_cofinality,
    check_generalized_reduction,
    check_observation_pij,
    check_pij,
    check_push_diamond,
    check_qmono,
    check_reduction,
    cofinal_family,
    q_family,
    report_to_json,
    report_to_jsonl,
)

__version__ = "0.1.0"
