"""Fuzzy lexicon search over a bidirectional compacted suffix automaton index."""

from .baselines import (
    CoverageError,
    PerfectIndex,
    Trie,
    brute_force_search,
    forward_backward_search,
    oflazer_search,
)
from .bench import (
    CorrectnessError,
    format_csv,
    generate_lexicon,
    generate_queries,
    run_benchmark,
    verify_equivalence,
)
from .distance import (
    OVER_CUTOFF,
    UNREACHABLE,
    Alignment,
    FilterState,
    NoAlignmentError,
    Operation,
    OperationSet,
    ParseError,
    align,
    distance,
    filter_distance,
    filter_start,
    filter_step,
    parse_operations,
    preset_operations,
    reverse_operations,
    split_alignment,
)
from .scdawg import (
    DOLLAR,
    HASH,
    Cursor,
    Index,
    Lexicon,
    LexiconError,
    SerializationError,
    add_string_cdawg,
    build_index,
    deserialize,
    load_lexicon,
    make_lexicon,
    serialize,
)
from .search import (
    Candidate,
    DerivedQuery,
    QueryNode,
    QueryTooShort,
    SolveResult,
    build_query_tree,
    derived_queries,
    extend_candidates,
    node_solutions,
    positional_prune,
    solve,
    solve_leaf,
    solve_node_bottom_up,
)

__all__ = [
    "OVER_CUTOFF",
    "UNREACHABLE",
    "Alignment",
    "Candidate",
    "CorrectnessError",
    "CoverageError",
    "Cursor",
    "DOLLAR",
    "DerivedQuery",
    "FilterState",
    "HASH",
    "Index",
    "Lexicon",
    "LexiconError",
    "NoAlignmentError",
    "Operation",
    "OperationSet",
    "ParseError",
    "PerfectIndex",
    "QueryNode",
    "QueryTooShort",
    "SerializationError",
    "SolveResult",
    "Trie",
    "add_string_cdawg",
    "align",
    "brute_force_search",
    "build_index",
    "build_query_tree",
    "derived_queries",
    "deserialize",
    "distance",
    "extend_candidates",
    "filter_distance",
    "filter_start",
    "filter_step",
    "forward_backward_search",
    "format_csv",
    "generate_lexicon",
    "generate_queries",
    "load_lexicon",
    "make_lexicon",
    "node_solutions",
    "oflazer_search",
    "parse_operations",
    "positional_prune",
    "preset_operations",
    "reverse_operations",
    "run_benchmark",
    "serialize",
    "solve",
    "solve_leaf",
    "solve_node_bottom_up",
    "split_alignment",
    "verify_equivalence",
]
