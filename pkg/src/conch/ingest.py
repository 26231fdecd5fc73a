"""Corpus file format: parsing, serialization, statistics.

One corpus is one JSON document. Stored text is the source of truth; content
lengths are recomputed on ingest and a stored value that disagrees is reported
as a warning, never trusted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import model, textutil
from .errors import DanglingReference, DuplicateId, MalformedDocument, SchemaViolation
from .model import (
    Block, ClashPoint, Competition, ContentMetric, DebateCorpus, Debater,
    Disagreement, DisagreementPath, Issue, Session, Side, StrategyCatalog,
    StrategyEntry, StrategyTag, Turn, ValidationReport,
)

_TOP_KEYS = {"competition", "contentMetric", "debaters", "sessions",
             "clashPoints", "strategyCatalog"}


def _require(obj, keys: set[str], optional: set[str], where: str, issues: list[Issue]):
    if not isinstance(obj, dict):
        issues.append(Issue("SchemaViolation", where, f"expected object, got {type(obj).__name__}"))
        return False
    missing = keys - obj.keys()
    extra = obj.keys() - keys - optional
    for k in sorted(missing):
        issues.append(Issue("SchemaViolation", where, f"missing field {k!r}"))
    for k in sorted(extra):
        issues.append(Issue("SchemaViolation", where, f"unexpected field {k!r}"))
    return not missing


def _str_field(obj, key, where, issues) -> str:
    v = obj.get(key)
    if not isinstance(v, str):
        issues.append(Issue("SchemaViolation", where, f"field {key!r} must be a string"))
        return ""
    return v


def _int_field(obj, key, where, issues) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        issues.append(Issue("SchemaViolation", where, f"field {key!r} must be an integer"))
        return 0
    return v


def _list_field(obj, key, where, issues) -> list:
    v = obj.get(key)
    if not isinstance(v, list):
        issues.append(Issue("SchemaViolation", where, f"field {key!r} must be a list"))
        return []
    return v


def _pair(v, where, issues) -> tuple[int, int]:
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(x, int) and not isinstance(x, bool) for x in v)):
        return (v[0], v[1])
    issues.append(Issue("SchemaViolation", where, f"expected [start, end] pair, got {v!r}"))
    return (0, 0)


def decode_document(document: bytes | str) -> dict:
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"not UTF-8: {exc}") from exc
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be a JSON object")
    return doc


def corpus_from_document(doc: dict) -> tuple[DebateCorpus, ValidationReport]:
    """Build a corpus from a decoded document and validate it.

    Schema problems raise SchemaViolation with every issue aggregated; content
    problems (mismatched stored lengths, short-block clash refs) come back as
    report warnings. Referential errors surface through the returned report;
    callers wanting exceptions use parse_corpus.
    """
    issues: list[Issue] = []
    warnings: list[Issue] = []

    _require(doc, _TOP_KEYS, set(), "$", issues)
    if issues:
        raise SchemaViolation("document does not match the corpus schema", issues)

    comp_doc = doc["competition"]
    _require(comp_doc, {"name", "language", "format"}, set(), "competition", issues)
    competition = Competition(
        name=_str_field(comp_doc, "name", "competition", issues),
        language=_str_field(comp_doc, "language", "competition", issues),
        format=_str_field(comp_doc, "format", "competition", issues),
    ) if isinstance(comp_doc, dict) else Competition("", "", "")

    cm_doc = doc["contentMetric"]
    _require(cm_doc, {"mode"}, {"wordTokenizer"}, "contentMetric", issues)
    if isinstance(cm_doc, dict):
        mode = _str_field(cm_doc, "mode", "contentMetric", issues)
        if mode not in ContentMetric.MODES:
            issues.append(Issue("SchemaViolation", "contentMetric",
                                f"mode must be one of {ContentMetric.MODES}, got {mode!r}"))
        tokenizer = cm_doc.get("wordTokenizer",
                               textutil.default_tokenizer_name(competition.language))
        if tokenizer not in textutil.WORD_TOKENIZERS:
            issues.append(Issue("SchemaViolation", "contentMetric",
                                f"unknown wordTokenizer {tokenizer!r}"))
            tokenizer = "whitespace"
        metric = ContentMetric(mode if mode in ContentMetric.MODES else "whitespaceTokens",
                               tokenizer)
    else:
        metric = ContentMetric("whitespaceTokens", "whitespace")

    debaters = []
    for i, d in enumerate(_list_field(doc, "debaters", "$", issues)):
        where = f"debaters[{i}]"
        if not _require(d, {"id", "side", "ordinal", "displayName"}, set(), where, issues):
            continue
        side_text = _str_field(d, "side", where, issues)
        try:
            side = Side(side_text)
        except ValueError:
            issues.append(Issue("SchemaViolation", where,
                                f"side must be 'affirmative' or 'negative', got {side_text!r}"))
            side = Side.AFFIRMATIVE
        debaters.append(Debater(
            id=_str_field(d, "id", where, issues), side=side,
            ordinal=_int_field(d, "ordinal", where, issues),
            display_name=_str_field(d, "displayName", where, issues)))

    sessions, turns, blocks = [], [], []
    for i, s in enumerate(_list_field(doc, "sessions", "$", issues)):
        where = f"sessions[{i}]"
        if not _require(s, {"id", "index", "title", "turns"}, set(), where, issues):
            continue
        session_id = _str_field(s, "id", where, issues)
        turn_ids = []
        for j, t in enumerate(_list_field(s, "turns", where, issues)):
            t_where = f"{where}.turns[{j}]"
            if not _require(t, {"id", "debaterId", "blocks"}, set(), t_where, issues):
                continue
            turn_id = _str_field(t, "id", t_where, issues)
            debater_id = _str_field(t, "debaterId", t_where, issues)
            block_ids = []
            for k, b in enumerate(_list_field(t, "blocks", t_where, issues)):
                b_where = f"{t_where}.blocks[{k}]"
                if not _require(b, {"id", "text", "strategyTags", "clashPointIds",
                                    "disagreementIds"},
                                {"sentenceSpans", "contentLength"}, b_where, issues):
                    continue
                block_id = _str_field(b, "id", b_where, issues)
                text = _str_field(b, "text", b_where, issues)
                tags = tuple(
                    StrategyTag(_str_field(tag, "strategyId", b_where, issues),
                                _pair(tag.get("sentenceRange"), b_where, issues))
                    for tag in _list_field(b, "strategyTags", b_where, issues)
                    if _require(tag, {"strategyId", "sentenceRange"}, set(), b_where, issues))
                computed = model.content_length_of(text, metric)
                stored = b.get("contentLength")
                if stored is not None and stored != computed:
                    warnings.append(Issue("ContentLengthRecomputed", block_id,
                                          f"stored {stored}, recomputed {computed}"))
                if "sentenceSpans" in b:
                    spans = tuple(_pair(p, b_where, issues)
                                  for p in _list_field(b, "sentenceSpans", b_where, issues))
                else:
                    n = len(textutil.sentence_spans(text))
                    spans = model.derive_sentence_spans(n, tags)
                side = next((d.side for d in debaters if d.id == debater_id), Side.AFFIRMATIVE)
                blocks.append(Block(
                    id=block_id, session_id=session_id, turn_id=turn_id,
                    debater_id=debater_id, side=side, text=text,
                    content_length=computed, strategy_tags=tags,
                    clash_point_ids=frozenset(
                        x for x in _list_field(b, "clashPointIds", b_where, issues)
                        if isinstance(x, str)),
                    disagreement_ids=frozenset(
                        x for x in _list_field(b, "disagreementIds", b_where, issues)
                        if isinstance(x, str)),
                    sentence_spans=spans))
                block_ids.append(block_id)
            turns.append(Turn(turn_id, debater_id, tuple(block_ids)))
            turn_ids.append(turn_id)
        sessions.append(Session(session_id, _int_field(s, "index", where, issues),
                                _str_field(s, "title", where, issues), tuple(turn_ids)))

    clash_points, disagreements = [], []
    explicit_colors = []
    for i, c in enumerate(_list_field(doc, "clashPoints", "$", issues)):
        where = f"clashPoints[{i}]"
        if not _require(c, {"id", "label", "disagreements"}, {"colorKey"}, where, issues):
            continue
        cp_id = _str_field(c, "id", where, issues)
        dis_ids = []
        for j, d in enumerate(_list_field(c, "disagreements", where, issues)):
            d_where = f"{where}.disagreements[{j}]"
            if not _require(d, {"id", "label", "affirmativeViewpoint",
                                "negativeViewpoint", "path"}, set(), d_where, issues):
                continue
            dis_id = _str_field(d, "id", d_where, issues)
            path = tuple(x for x in _list_field(d, "path", d_where, issues)
                         if isinstance(x, str))
            disagreements.append(Disagreement(
                id=dis_id, clash_point_id=cp_id,
                label=_str_field(d, "label", d_where, issues),
                affirmative_viewpoint=_str_field(d, "affirmativeViewpoint", d_where, issues),
                negative_viewpoint=_str_field(d, "negativeViewpoint", d_where, issues),
                path=DisagreementPath(path)))
            dis_ids.append(dis_id)
        explicit_colors.append(c.get("colorKey"))
        clash_points.append(ClashPoint(cp_id, _str_field(c, "label", where, issues),
                                       "", tuple(dis_ids)))

    entries = []
    for i, e in enumerate(_list_field(doc, "strategyCatalog", "$", issues)):
        where = f"strategyCatalog[{i}]"
        if not _require(e, {"id", "name", "iconKey", "description"}, set(), where, issues):
            continue
        entries.append(StrategyEntry(
            _str_field(e, "id", where, issues), _str_field(e, "name", where, issues),
            _str_field(e, "iconKey", where, issues),
            _str_field(e, "description", where, issues)))

    if issues:
        raise SchemaViolation("document does not match the corpus schema", issues)

    # color keys: explicit values win when the document carries a full set,
    # otherwise derive from total block reference counts (busiest first)
    if explicit_colors and all(isinstance(x, str) and x for x in explicit_colors):
        clash_points = [ClashPoint(cp.id, cp.label, color, cp.disagreement_ids)
                        for cp, color in zip(clash_points, explicit_colors)]
    else:
        counts = {cp.id: 0 for cp in clash_points}
        for block in blocks:
            for cp_id in block.clash_point_ids:
                if cp_id in counts:
                    counts[cp_id] += 1
        keys = model.assign_color_keys(counts)
        clash_points = [ClashPoint(cp.id, cp.label, keys.get(cp.id, ""), cp.disagreement_ids)
                        for cp in clash_points]

    corpus = DebateCorpus(
        competition=competition, content_metric=metric, debaters=tuple(debaters),
        sessions=tuple(sessions), turns=tuple(turns), blocks=tuple(blocks),
        clash_points=tuple(clash_points), disagreements=tuple(disagreements),
        strategy_catalog=StrategyCatalog(tuple(entries)))
    report = model.validate_corpus(corpus)
    report = ValidationReport(report.errors, tuple(warnings) + report.warnings)
    return corpus, report


def parse_corpus(document: bytes | str, strict: bool = False) -> DebateCorpus:
    """Parse and validate; raises on any error, and on warnings when strict."""
    corpus, report = corpus_from_document(decode_document(document))
    errors = list(report.errors)
    if strict:
        errors += list(report.warnings)
    if errors:
        summary = "; ".join(str(i) for i in errors[:8])
        if any(i.code == "DuplicateId" for i in errors):
            exc: Exception = DuplicateId(summary)
        elif any(i.code == "DanglingReference" for i in errors):
            exc = DanglingReference(summary)
        else:
            exc = SchemaViolation(summary, errors)
        exc.issues = errors
        raise exc
    return corpus


def serialize_corpus(corpus: DebateCorpus) -> str:
    """Emit the canonical JSON document; parse(serialize(c)) == c field-for-field."""
    turns = {t.id: t for t in corpus.turns}
    blocks = {b.id: b for b in corpus.blocks}
    doc = {
        "competition": {"name": corpus.competition.name,
                        "language": corpus.competition.language,
                        "format": corpus.competition.format},
        "contentMetric": {"mode": corpus.content_metric.mode,
                          "wordTokenizer": corpus.content_metric.word_tokenizer},
        "debaters": [{"id": d.id, "side": d.side.value, "ordinal": d.ordinal,
                      "displayName": d.display_name} for d in corpus.debaters],
        "sessions": [{
            "id": s.id, "index": s.index, "title": s.title,
            "turns": [{
                "id": t, "debaterId": turns[t].debater_id,
                "blocks": [{
                    "id": b, "text": blocks[b].text,
                    "contentLength": blocks[b].content_length,
                    "sentenceSpans": [list(p) for p in blocks[b].sentence_spans],
                    "strategyTags": [{"strategyId": tag.strategy_id,
                                      "sentenceRange": list(tag.sentence_range)}
                                     for tag in blocks[b].strategy_tags],
                    "clashPointIds": sorted(blocks[b].clash_point_ids),
                    "disagreementIds": sorted(blocks[b].disagreement_ids),
                } for b in turns[t].block_ids],
            } for t in s.turn_ids],
        } for s in corpus.sessions],
        "clashPoints": [{
            "id": c.id, "label": c.label, "colorKey": c.color_key,
            "disagreements": [{
                "id": d.id, "label": d.label,
                "affirmativeViewpoint": d.affirmative_viewpoint,
                "negativeViewpoint": d.negative_viewpoint,
                "path": list(d.path.block_ids),
            } for d in (next(x for x in corpus.disagreements if x.id == i)
                        for i in c.disagreement_ids)],
        } for c in corpus.clash_points],
        "strategyCatalog": [{"id": e.id, "name": e.name, "iconKey": e.icon_key,
                             "description": e.description}
                            for e in corpus.strategy_catalog.entries],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Statistics


@dataclass(frozen=True)
class CorpusStats:
    debater_count: int
    session_count: int
    turn_count: int
    block_count: int
    total_content_length: int
    per_side: dict[str, int]
    #: (sessionId, contentLength) ordered by session index
    per_session: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "debaterCount": self.debater_count,
            "sessionCount": self.session_count,
            "turnCount": self.turn_count,
            "blockCount": self.block_count,
            "totalContentLength": self.total_content_length,
            "perSide": dict(self.per_side),
            "perSession": [{"sessionId": s, "contentLength": n}
                           for s, n in self.per_session],
        }


def compute_stats(corpus: DebateCorpus) -> CorpusStats:
    index = model.CorpusIndex(corpus)
    per_side = {side.value: 0 for side in Side}
    per_session = []
    total = 0
    for session in sorted(corpus.sessions, key=lambda s: s.index):
        length = 0
        for block_id in index.session_blocks[session.id]:
            block = index.blocks[block_id]
            length += block.content_length
            per_side[block.side.value] += block.content_length
        per_session.append((session.id, length))
        total += length
    return CorpusStats(
        debater_count=len(corpus.debaters),
        session_count=len(corpus.sessions),
        turn_count=len(corpus.turns),
        block_count=len(corpus.blocks),
        total_content_length=total,
        per_side=per_side,
        per_session=tuple(per_session))


def session_content_lengths(corpus: DebateCorpus) -> list[int]:
    """Per-session totals ordered by session index; the layout inputs."""
    return [n for _, n in compute_stats(corpus).per_session]
