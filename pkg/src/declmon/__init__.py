"""Decentralized LTL runtime monitoring over synchronous processes.

A tableau of the monitored formula drives the whole pipeline: early
unsatisfiable/valid verdicts at setup, round-robin ring synthesis, the
shared formula index map, and minimal observation propagation; an inference
engine lets receivers recover definite atom values from compound-formula
truth values. A centralized three-valued oracle and a progression baseline
come along for validation and benchmarking.
"""

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
    atoms,
    conj,
    disj,
    fold,
    format_formula,
    implies,
    logical_ops,
    nnf,
    temporal_ops,
    temporal_size,
)
from .parser import FormulaSyntaxError, parse
from .semantics import (
    BOT,
    TOP,
    UNKNOWN,
    PartialValuation,
    TruthValue3,
    UnvaluedTemporalError,
    eval3,
)
from .progression import progress, progress_partial
from .system import AlphabetError, Event, SystemAlphabet, Trace, parse_alphabet, parse_trace
from .tableau import (
    Branch,
    BranchProfile,
    NodeStatus,
    Tableau,
    TableauNode,
    branch_profiles,
    build,
    is_satisfiable,
    refine,
    to_dot,
)
from .ltl3 import ltl3_eval, residual_verdict, satisfiable
from .inference import (
    Deduction,
    EvaluatedFormula,
    InconsistentEvaluationError,
    ObservationSet,
    deduce,
    deduce_temporal,
    deduction_set,
    match_rule,
)
from .knowledge import (
    CommScheme,
    KnowledgeConflictError,
    KnowledgeStore,
    ObsPowerModel,
    TruthTable,
    build_table_template,
    build_truth_table,
)
from .monitor import (
    Message,
    Metrics,
    MonitorState,
    RRPolicy,
    RunResult,
    VerdictConflictError,
    decode_message,
    min_list,
    monitor_step,
    rank_dm1,
    rank_dm2,
    run,
)
from .bench import (
    BenchConfig,
    BenchReport,
    PATTERN_KINDS,
    bench,
    default_alphabet,
    pattern_formula,
    random_formula,
    random_trace,
    run_bf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
