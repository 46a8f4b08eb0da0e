"""Composite state machine discovery and artifact interaction analysis.

The package ingests event logs where each case tracks several artifacts at
once, discovers a composite state machine over their joint states, and ranks
how strongly the artifacts influence each other using association measures.
"""

from .errors import (
    ConflictError,
    ConformanceError,
    CsmError,
    EmptyLogError,
    MappingError,
    NotFoundError,
    ParseError,
    ProjectionError,
    QueryError,
)
from .explorer import (
    HighlightSet,
    InteractionRecord,
    Query,
    enumerate_interactions,
    export_interactions,
    export_model,
    highlight,
    import_model,
    interpret,
)
from .ingest import (
    EventLog,
    ExecutionSequence,
    MappingConfig,
    StateEntry,
    discover_model,
    ingest_csv,
    parse_timestamp,
    project_log,
    project_sequence,
    write_csv,
)
from .interactions import (
    KIND_FORWARD,
    KIND_STATE,
    KIND_TRANSITION,
    KINDS,
    ForwardKey,
    InteractionEngine,
    ProbabilityEstimates,
    StateKey,
    TransitionKey,
    estimate_probabilities,
    forward_strength,
    state_strength,
    transition_strength,
)
from .measures import MEASURES, MeasureVector, compute_measures
from .model import (
    ArtifactDecl,
    CompositeState,
    CsmModel,
    Marker,
    artifact_model,
    final_state,
    initial_state,
    project_model,
    project_state,
)
from .stats import (
    Annotation,
    annotate,
    durations,
    entry_duration,
    sojourn,
    total_time,
    total_transitions,
    transition_freq,
)

__version__ = "0.1.0"

__all__ = [
    "Annotation",
    "ArtifactDecl",
    "CompositeState",
    "ConflictError",
    "ConformanceError",
    "CsmError",
    "CsmModel",
    "EmptyLogError",
    "EventLog",
    "ExecutionSequence",
    "ForwardKey",
    "HighlightSet",
    "InteractionEngine",
    "InteractionRecord",
    "KINDS",
    "KIND_FORWARD",
    "KIND_STATE",
    "KIND_TRANSITION",
    "MEASURES",
    "MappingConfig",
    "MappingError",
    "Marker",
    "MeasureVector",
    "NotFoundError",
    "ParseError",
    "ProbabilityEstimates",
    "ProjectionError",
    "Query",
    "QueryError",
    "StateEntry",
    "StateKey",
    "TransitionKey",
    "annotate",
    "artifact_model",
    "compute_measures",
    "discover_model",
    "durations",
    "entry_duration",
    "enumerate_interactions",
    "estimate_probabilities",
    "export_interactions",
    "export_model",
    "final_state",
    "forward_strength",
    "highlight",
    "import_model",
    "ingest_csv",
    "initial_state",
    "interpret",
    "parse_timestamp",
    "project_log",
    "project_model",
    "project_sequence",
    "project_state",
    "sojourn",
    "state_strength",
    "total_time",
    "total_transitions",
    "transition_freq",
    "transition_strength",
    "write_csv",
]
