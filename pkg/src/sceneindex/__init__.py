"""sceneindex: index videos by what viewers actually replay.

Ingests timestamped player interactions, accumulates them into per-second
score heatmaps, and extracts the most-replayed moments as index points
(thumbnail anchors), served over an HTTP API.
"""

from .errors import SceneIndexError
from .model import (
    EventKind,
    InteractionEvent,
    SessionRecord,
    VideoMeta,
    validate_session,
)
from .heatmap import (
    DEFAULT_PROFILE,
    EXTENDED_PROFILE,
    PROFILES,
    ScoreHeatmap,
    ScoringConfig,
    ScoringRule,
    apply_event,
    build_heatmap,
    merge_heatmaps,
    zero_heatmap,
)
from .indexer import IndexPoint, IndexRequest, extract_index_points
from .logfmt import parse_log_text, serialize_log_text, import_legacy_table
from .store import SessionStore

__all__ = [
    "SceneIndexError",
    "EventKind",
    "InteractionEvent",
    "SessionRecord",
    "VideoMeta",
    "validate_session",
    "DEFAULT_PROFILE",
    "EXTENDED_PROFILE",
    "PROFILES",
    "ScoreHeatmap",
    "ScoringConfig",
    "ScoringRule",
    "apply_event",
    "build_heatmap",
    "merge_heatmaps",
    "zero_heatmap",
    "IndexPoint",
    "IndexRequest",
    "extract_index_points",
    "parse_log_text",
    "serialize_log_text",
    "import_legacy_table",
    "SessionStore",
]

__version__ = "0.1.0"
