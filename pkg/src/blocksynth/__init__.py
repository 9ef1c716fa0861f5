"""Reversible-circuit synthesis for n-bit substitution maps.

The synthesis core halves the active problem size per stage by pairing up
rows and steering each pair into a reserved region of columns, then recurses
on the narrower residual map.  On top of that sit gate/permutation
primitives, conditioning passes that repair unfavourable row distributions,
cost accounting against analytic per-stage budgets, multiple-control
expansion, and text formats for permutations, truth tables, circuits and
reports.
"""

from .blocks import (
    Block,
    BlockList,
    PairKind,
    PositionCounts,
    classify_positions,
    count_free_blocks,
    find_blocks,
    findm,
    in_region,
    region_start,
)
from .conditioning import (
    MixConfig,
    MixStats,
    PseudoPair,
    mix,
    pre_pick,
    preprocess,
)
from .core import (
    MAX_WIDTH,
    Gate,
    GateSequence,
    NotABijection,
    NotReducible,
    Permutation,
    PreconditionViolated,
    WidthMismatch,
    apply_gate,
    apply_sequence,
    cx,
    is_reducible,
    mct,
    parity,
    reduce_width,
    run_circuit,
    sample,
    toffoli,
    verify_identity,
    x,
)
from .cost import (
    COST_TABLE_ENV,
    CostTable,
    DEFAULT_TABLE,
    ExpansionResult,
    MissingCostEntry,
    expand_mct,
    load_cost_table,
    quantum_cost,
    read_cost_table,
    resolve_table,
    toffoli_count,
)
from .io_formats import (
    ArityMismatch,
    CircuitFile,
    MalformedInteger,
    TruthTable,
    Unbalanced,
    UnknownDirective,
    UnknownLineName,
    WrongCount,
    embed_truth_table,
    format_permutation,
    format_real,
    format_truth_table,
    parse_permutation,
    parse_real,
    parse_report,
    parse_truth_table,
    read_real,
    write_report,
)
from .reduction import (
    BoundSet,
    PairNotFound,
    ReductionStats,
    RelevantPair,
    alloc,
    bounds,
    cons,
    lift_into_region,
    n_pick,
    pick,
    preprocessing_bound,
    reduce_general,
    reduce_normal,
)
from .synthesis import (
    RuntimeEstimate,
    StageStats,
    SynthesisConfig,
    SynthesisReport,
    estimate_runtime_class,
    peephole,
    search_two_bit,
    select_with_lookahead,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "Block",
    "BlockList",
    "BoundSet",
    "COST_TABLE_ENV",
    "CircuitFile",
    "CostTable",
    "DEFAULT_TABLE",
    "ExpansionResult",
    "Gate",
    "GateSequence",
    "MAX_WIDTH",
    "MalformedInteger",
    "MissingCostEntry",
    "MixConfig",
    "MixStats",
    "NotABijection",
    "NotReducible",
    "PairKind",
    "PairNotFound",
    "Permutation",
    "PositionCounts",
    "PreconditionViolated",
    "PseudoPair",
    "ReductionStats",
    "RelevantPair",
    "RuntimeEstimate",
    "StageStats",
    "SynthesisConfig",
    "SynthesisReport",
    "TruthTable",
    "Unbalanced",
    "UnknownDirective",
    "UnknownLineName",
    "WidthMismatch",
    "WrongCount",
    "alloc",
    "apply_gate",
    "apply_sequence",
    "bounds",
    "classify_positions",
    "cons",
    "count_free_blocks",
    "cx",
    "embed_truth_table",
    "estimate_runtime_class",
    "expand_mct",
    "find_blocks",
    "findm",
    "format_permutation",
    "format_real",
    "format_truth_table",
    "in_region",
    "is_reducible",
    "lift_into_region",
    "load_cost_table",
    "mct",
    "mix",
    "n_pick",
    "parity",
    "parse_permutation",
    "parse_real",
    "parse_report",
    "parse_truth_table",
    "peephole",
    "pick",
    "pre_pick",
    "preprocess",
    "preprocessing_bound",
    "quantum_cost",
    "read_cost_table",
    "read_real",
    "reduce_general",
    "reduce_normal",
    "reduce_width",
    "region_start",
    "resolve_table",
    "run_circuit",
    "sample",
    "search_two_bit",
    "select_with_lookahead",
    "synthesize",
    "toffoli",
    "toffoli_count",
    "verify_identity",
    "write_report",
    "x",
]
