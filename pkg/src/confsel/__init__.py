"""Interactive confounder selection over causal graphs.

Core pieces: acyclic directed mixed graphs with latent projection
(:mod:`confsel.graph`), walk- and path-level separation tests
(:mod:`confsel.separation`), adjustment-set predicates and exhaustive
enumerators (:mod:`confsel.adjustment`), the oracle protocol
(:mod:`confsel.oracle`), the iterative expansion engine
(:mod:`confsel.expansion`), and sessions with record/replay
(:mod:`confsel.session`).  The HTTP API lives in
:mod:`confsel.service` and the command-line tool in
:mod:`confsel.cli`.
"""

from ._version import __version__
from .adjustment import (
    canonical_family,
    enumerate_minimal_mediator_sets,
    enumerate_minimal_primary,
    enumerate_minimal_sufficient,
    enumerate_sufficient,
    format_vertex_set,
    is_adjustment_set,
    is_primary,
    is_sufficient,
    minimal_members,
    pearl_backdoor,
)
from .expansion import (
    ALGORITHM_QUEUE,
    ALGORITHM_RECURSIVE,
    BudgetExceededError,
    DepthCapError,
    EdgeSelected,
    ExpansionConfig,
    ExpansionResult,
    INITIAL_STATE,
    OracleExchange,
    SetEmitted,
    StatePopped,
    StatePushed,
    STRATEGY_FIRST,
    STRATEGY_MIN_CUT,
    WorkingState,
    confounder_select,
    confounder_select_recursive,
    find_primary,
    min_cut_index,
    select_edge,
    uncertain_pairs,
)
from .graph import (
    Admg,
    GraphError,
    GraphParseError,
    ancestors,
    canonical_dag,
    descendants,
    districts,
    make_admg,
    marginalize,
    parse_graph,
    serialize_graph,
)
from .oracle import (
    CommonCauseAnswer,
    CommonCauseQuery,
    FindMediatorAnswer,
    FindMediatorQuery,
    GraphOracle,
    IsObservedAnswer,
    IsObservedQuery,
    ProtocolError,
    ReplayDivergenceError,
    ReplayOracle,
    validate_answer,
)
from .separation import (
    ConnectionKind,
    SizeCapError,
    collider_connected,
    connected,
    district_criterion,
    enumerate_unblocked_paths,
    set_connected,
)
from .session import (
    Recorder,
    ReplayReport,
    Session,
    SessionConflictError,
    SessionTranscript,
    TranscriptError,
    TranscriptHeader,
    decode_transcript,
    encode_transcript,
    render_question,
    replay_transcript,
)

__all__ = [
    "__version__",
    "Admg",
    "GraphError",
    "GraphParseError",
    "ancestors",
    "canonical_dag",
    "descendants",
    "districts",
    "make_admg",
    "marginalize",
    "parse_graph",
    "serialize_graph",
    "ConnectionKind",
    "SizeCapError",
    "collider_connected",
    "connected",
    "district_criterion",
    "enumerate_unblocked_paths",
    "set_connected",
    "canonical_family",
    "enumerate_minimal_mediator_sets",
    "enumerate_minimal_primary",
    "enumerate_minimal_sufficient",
    "enumerate_sufficient",
    "format_vertex_set",
    "is_adjustment_set",
    "is_primary",
    "is_sufficient",
    "minimal_members",
    "pearl_backdoor",
    "CommonCauseQuery",
    "IsObservedQuery",
    "FindMediatorQuery",
    "CommonCauseAnswer",
    "IsObservedAnswer",
    "FindMediatorAnswer",
    "GraphOracle",
    "ReplayOracle",
    "ReplayDivergenceError",
    "ProtocolError",
    "validate_answer",
    "ALGORITHM_QUEUE",
    "ALGORITHM_RECURSIVE",
    "STRATEGY_FIRST",
    "STRATEGY_MIN_CUT",
    "BudgetExceededError",
    "DepthCapError",
    "ExpansionConfig",
    "ExpansionResult",
    "INITIAL_STATE",
    "WorkingState",
    "StatePopped",
    "StatePushed",
    "EdgeSelected",
    "SetEmitted",
    "OracleExchange",
    "confounder_select",
    "confounder_select_recursive",
    "find_primary",
    "min_cut_index",
    "select_edge",
    "uncertain_pairs",
    "Recorder",
    "ReplayReport",
    "Session",
    "SessionConflictError",
    "SessionTranscript",
    "TranscriptError",
    "TranscriptHeader",
    "decode_transcript",
    "encode_transcript",
    "render_question",
    "replay_transcript",
]
