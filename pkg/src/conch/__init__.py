"""Visual analytics for competitive debate transcripts.

Parses annotated corpora, lays out the multi-spiral process view, the
strategy distribution view and content cards, and serves scene graphs and
SVG renderings over HTTP and the command line.
"""

from .errors import (
    AngleCapExceeded, AngleFloorUnmet, ConchError, DanglingReference,
    DegenerateAgreement, DuplicateId, EmptyPrediction, EmptyTurn,
    LlmOutputUnparsable, LlmUnavailable, MalformedDocument, NegativeRadius,
    SchemaViolation, UnknownFilterTarget, UnknownStrategyId,
)
from .ingest import (
    compute_stats, corpus_from_document, decode_document, parse_corpus,
    serialize_corpus,
)
from .model import (
    Block, ClashPoint, ContentMetric, CorpusIndex, DebateCorpus, Debater,
    Disagreement, Session, Side, StrategyCatalog, StrategyEntry, StrategyTag,
    Turn, ValidationReport, validate_corpus,
)
from .scene import FilterState, SceneGraph, build_scene
from .svgout import render_svg

__version__ = "0.1.0"

__all__ = [
    "AngleCapExceeded", "AngleFloorUnmet", "ConchError", "DanglingReference",
    "DegenerateAgreement", "DuplicateId", "EmptyPrediction", "EmptyTurn",
    "LlmOutputUnparsable", "LlmUnavailable", "MalformedDocument",
    "NegativeRadius", "SchemaViolation", "UnknownFilterTarget",
    "UnknownStrategyId",
    "compute_stats", "corpus_from_document", "decode_document",
    "parse_corpus", "serialize_corpus",
    "Block", "ClashPoint", "ContentMetric", "CorpusIndex", "DebateCorpus",
    "Debater", "Disagreement", "Session", "Side", "StrategyCatalog",
    "StrategyEntry", "StrategyTag", "Turn", "ValidationReport",
    "validate_corpus",
    "FilterState", "SceneGraph", "build_scene", "render_svg",
    "__version__",
]
