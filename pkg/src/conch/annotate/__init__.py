from .client import (
    HttpTransport, LlmClient, MockTransport, RecordingTransport,
    ReplayTransport, client_from_env,
)
from .metrics import fleiss_kappa, precision
from .pipeline import (
    DEFAULT_STRATEGY_CATALOG, FALLBACK_MARKERS, PipelineBlock,
    annotate_to_corpus, annotate_transcript, assign_references, build_paths,
    extract_clash_structure, label_strategies, normalize_clash_structure,
    segment_turn,
)

__all__ = [
    "HttpTransport", "LlmClient", "MockTransport", "RecordingTransport",
    "ReplayTransport", "client_from_env",
    "fleiss_kappa", "precision",
    "DEFAULT_STRATEGY_CATALOG", "FALLBACK_MARKERS", "PipelineBlock",
    "annotate_to_corpus", "annotate_transcript", "assign_references",
    "build_paths", "extract_clash_structure", "label_strategies",
    "normalize_clash_structure", "segment_turn",
]
