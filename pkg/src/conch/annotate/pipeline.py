"""Annotation pipeline: segmentation, strategy labeling, clash structure,
reference assignment, path construction.

Every step runs against an LLM client when one is supplied and otherwise
falls back to a deterministic offline rule, so the whole pipeline is
reproducible without network access. Post-processing never depends on
response arrival order.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .. import model, textutil
from ..errors import (
    EmptyTurn, LlmOutputUnparsable, LlmUnavailable, SchemaViolation,
    UnknownStrategyId,
)
from ..model import ContentMetric, Issue, StrategyCatalog, StrategyEntry, StrategyTag
from .client import LlmClient

FALLBACK_SEGMENT_SENTENCES = 3

DEFAULT_STRATEGY_CATALOG = StrategyCatalog((
    StrategyEntry("agreement", "Refutation through Agreement", "handshake",
                  "Concede a narrow point to collapse the broader claim built on it."),
    StrategyEntry("reasoning", "Refutation through Reasoning", "gears",
                  "Attack the inferential link between premise and conclusion."),
    StrategyEntry("evidence", "Refutation through Evidence", "document",
                  "Counter a claim with data, studies, or concrete examples."),
    StrategyEntry("ignoring", "Refutation through Ignoring", "eye",
                  "Deliberately pass over an attack to starve it of attention."),
    StrategyEntry("questioning", "Refutation through Questioning", "question",
                  "Interrogate the hidden assumptions behind a claim."),
    StrategyEntry("reframing", "Refutation through Reframing", "frame",
                  "Shift the definitional ground so the attack no longer lands."),
))

#: marker lexemes per strategy for offline labeling; matched case-insensitively
#: inside a sentence, first catalog-ordered hit wins
FALLBACK_MARKERS: dict[str, tuple[str, ...]] = {
    "agreement": ("we concede", "we agree", "granted that", "even if that is true"),
    "reasoning": ("because", "therefore", "it follows", "the logic"),
    "evidence": ("studies show", "the data", "statistics", "the evidence",
                 "for example"),
    "ignoring": ("set aside", "moving on", "not worth", "irrelevant"),
    "questioning": ("why would", "how can", "ask yourself", "what proof"),
    "reframing": ("the real question", "reframe", "actually about", "redefine"),
}

_SEGMENT_PROMPT = (
    "Split this debate turn into coherent argument blocks. The turn has {n} "
    "sentences, indexed from 0. Reply with JSON {{\"cuts\": [...]}} listing "
    "the sentence index that STARTS each block after the first; indices must "
    "be strictly ascending and lie strictly between 0 and {n}.\n\n{text}"
)
_LABEL_PROMPT = (
    "Identify refutation strategies in this block of {n} sentences (0-indexed)."
    " Known strategy ids: {ids}. Reply with JSON [{{\"strategyId\": \"...\", "
    "\"range\": [start, end]}}] using inclusive sentence ranges.\n\n{text}"
)
_CLASH_PROMPT = (
    "Extract every clash point in this debate with its disagreements. Clash "
    "labels use 2-4 words, disagreement labels 2-3 words, viewpoints a single "
    "word per side. Reply with JSON {{\"clashPoints\": [{{\"label\": ..., "
    "\"disagreements\": [{{\"label\": ..., \"affirmativeViewpoint\": ..., "
    "\"negativeViewpoint\": ...}}]}}]}}.\n\n{text}"
)
_ASSIGN_PROMPT = (
    "Which clash points and disagreements does this block reference? Known "
    "clash ids: {clash_ids}; disagreement ids: {dis_ids}. Reply with JSON "
    "{{\"clashPointIds\": [...], \"disagreementIds\": [...]}}.\n\n{text}"
)
_PATH_PROMPT = (
    "Disagreement {dis} is referenced by blocks {blocks} in chronological "
    "order. Select the blocks that genuinely advance it. Reply with JSON "
    "{{\"blockIds\": [...]}} (a nonempty subset).\n\n{context}"
)


@dataclass
class PipelineBlock:
    """Mutable working record for one block while the pipeline runs."""
    id: str
    session_id: str
    turn_id: str
    debater_id: str
    text: str
    content_length: int
    sentence_count: int
    tags: list[StrategyTag] = field(default_factory=list)
    clash_point_ids: set[str] = field(default_factory=set)
    disagreement_ids: set[str] = field(default_factory=set)


# ---------------------------------------------------------------------------
# individual steps


def segment_turn(turn_text: str, client: LlmClient | None = None,
                 turn_id: str = "turn",
                 k: int = FALLBACK_SEGMENT_SENTENCES) -> list[str]:
    """Split a turn into block texts whose concatenation is the turn text.

    Offline rule: a cut every k sentences. With a client, the model proposes
    the cut indices and they are validated against the sentence count.
    """
    if not turn_text.strip():
        raise EmptyTurn(f"turn {turn_id} has no content")
    spans = textutil.sentence_spans(turn_text)
    n = len(spans)
    if client is None:
        cuts = list(range(k, n, k))
    else:
        prompt = _SEGMENT_PROMPT.format(n=n, text=turn_text)
        obj = client.complete_json(f"segment:{turn_id}", prompt)
        cuts = _validate_cuts(obj, n, turn_id)
    bounds = [0] + cuts + [n]
    blocks = []
    for a, b in zip(bounds, bounds[1:]):
        blocks.append(turn_text[spans[a][0]:spans[b - 1][1]])
    return blocks


def _validate_cuts(obj, n: int, turn_id: str) -> list[int]:
    if not isinstance(obj, dict) or not isinstance(obj.get("cuts"), list):
        raise LlmOutputUnparsable(f"segment:{turn_id}: expected {{'cuts': [...]}}")
    cuts = obj["cuts"]
    ok = all(isinstance(c, int) and not isinstance(c, bool) and 0 < c < n
             for c in cuts)
    if not ok or sorted(set(cuts)) != cuts:
        raise LlmOutputUnparsable(
            f"segment:{turn_id}: cuts {cuts!r} invalid for {n} sentences")
    return cuts


def label_strategies(block_text: str, catalog: StrategyCatalog,
                     client: LlmClient | None = None,
                     block_id: str = "block") -> list[StrategyTag]:
    """Tag sentence ranges with strategies from the catalog.

    Offline rule: per sentence, the first catalog strategy with a marker
    lexeme in the sentence wins; adjacent sentences with the same strategy
    merge into one tag.
    """
    sentences = textutil.split_sentences(block_text)
    n = len(sentences)
    if client is not None:
        ids = [e.id for e in catalog.entries]
        prompt = _LABEL_PROMPT.format(n=n, ids=", ".join(ids), text=block_text)
        obj = client.complete_json(f"label:{block_id}", prompt)
        return _validate_tags(obj, catalog, n, block_id)
    labels: list[str | None] = []
    for sentence in sentences:
        lowered = sentence.lower()
        hit = None
        for entry in catalog.entries:
            markers = FALLBACK_MARKERS.get(entry.id, ())
            if any(m in lowered for m in markers):
                hit = entry.id
                break
        labels.append(hit)
    tags: list[StrategyTag] = []
    start = 0
    for i in range(1, n + 1):
        if i == n or labels[i] != labels[start]:
            if labels[start] is not None:
                tags.append(StrategyTag(labels[start], (start, i - 1)))
            start = i
    return tags


def _validate_tags(obj, catalog: StrategyCatalog, n: int,
                   block_id: str) -> list[StrategyTag]:
    if not isinstance(obj, list):
        raise LlmOutputUnparsable(f"label:{block_id}: expected a JSON list")
    known = {e.id for e in catalog.entries}
    tags = []
    for item in obj:
        if (not isinstance(item, dict) or "strategyId" not in item
                or not isinstance(item.get("range"), list)
                or len(item["range"]) != 2):
            raise LlmOutputUnparsable(f"label:{block_id}: bad tag {item!r}")
        strategy_id = item["strategyId"]
        if strategy_id not in known:
            raise UnknownStrategyId(f"label:{block_id}: {strategy_id!r}")
        a, b = item["range"]
        if not (isinstance(a, int) and isinstance(b, int) and 0 <= a <= b < max(n, 1)):
            raise LlmOutputUnparsable(
                f"label:{block_id}: range [{a},{b}] outside {n} sentences")
        tags.append(StrategyTag(strategy_id, (a, b)))
    return tags


def extract_clash_structure(corpus_text: str, client: LlmClient | None,
                            metric: ContentMetric) -> list[dict]:
    """Clash points with nested disagreements and viewpoints.

    There is no offline rule for this step: fallback corpora carry manually
    authored structure in the transcript, so a missing client is an error.
    """
    if client is None:
        raise LlmUnavailable(
            "clash extraction requires a client; supply manual clashPoints "
            "in the transcript for offline runs")
    obj = client.complete_json("clash:structure",
                               _CLASH_PROMPT.format(text=corpus_text))
    return normalize_clash_structure(obj, metric)


def normalize_clash_structure(obj, metric: ContentMetric) -> list[dict]:
    """Validate phrase lengths, merge duplicate labels, assign missing ids."""
    if isinstance(obj, dict):
        raw = obj.get("clashPoints")
    else:
        raw = obj
    if not isinstance(raw, list):
        raise SchemaViolation("clash structure must be a list of clash points")
    issues: list[Issue] = []
    merged: dict[str, dict] = {}
    for item in raw:
        if not isinstance(item, dict) or "label" not in item:
            raise SchemaViolation(f"bad clash point entry: {item!r}")
        label = item["label"]
        words = textutil.word_count(label, metric.word_tokenizer)
        if not 2 <= words <= 4:
            issues.append(Issue("PhraseLength", label,
                                f"clash label has {words} words, need 2-4"))
        target = merged.setdefault(label, {"label": label, "disagreements": []})
        if "id" in item and "id" not in target:
            target["id"] = item["id"]
        seen_labels = {d["label"] for d in target["disagreements"]}
        for dis in item.get("disagreements", []):
            if not isinstance(dis, dict) or "label" not in dis:
                raise SchemaViolation(f"bad disagreement entry: {dis!r}")
            if dis["label"] in seen_labels:
                continue
            seen_labels.add(dis["label"])
            d_words = textutil.word_count(dis["label"], metric.word_tokenizer)
            if not 2 <= d_words <= 3:
                issues.append(Issue("PhraseLength", dis["label"],
                                    f"disagreement label has {d_words} words, need 2-3"))
            for side_key in ("affirmativeViewpoint", "negativeViewpoint"):
                viewpoint = dis.get(side_key, "")
                if textutil.word_count(viewpoint, metric.word_tokenizer) != 1:
                    issues.append(Issue("ViewpointNotSingleWord", viewpoint,
                                        f"{side_key} must be a single word"))
            target["disagreements"].append({
                "id": dis.get("id"),
                "label": dis["label"],
                "affirmativeViewpoint": dis.get("affirmativeViewpoint", ""),
                "negativeViewpoint": dis.get("negativeViewpoint", ""),
            })
    if issues:
        raise SchemaViolation("clash structure violates phrase-length rules",
                              issues)
    out = []
    for i, (label, item) in enumerate(merged.items(), start=1):
        cp_id = item.get("id") or f"cp{i}"
        disagreements = []
        for j, dis in enumerate(item["disagreements"], start=1):
            disagreements.append({
                "id": dis["id"] or f"{cp_id}-d{j}",
                "label": dis["label"],
                "affirmativeViewpoint": dis["affirmativeViewpoint"],
                "negativeViewpoint": dis["negativeViewpoint"],
            })
        out.append({"id": cp_id, "label": label, "disagreements": disagreements})
    return out


def assign_references(blocks: list[PipelineBlock], structure: list[dict],
                      client: LlmClient | None = None,
                      short_block_threshold: int = model.SHORT_BLOCK_THRESHOLD,
                      parallelism: int = 4) -> list[Issue]:
    """Attach clash/disagreement ids to blocks; returns warnings.

    Offline rule: case-insensitive label containment in the block text.
    Blocks under the short threshold lose all clash references with a
    warning. Disagreement references always pull in the parent clash id.
    """
    clash_ids = [cp["id"] for cp in structure]
    parent = {}
    dis_labels = {}
    for cp in structure:
        for dis in cp["disagreements"]:
            parent[dis["id"]] = cp["id"]
            dis_labels[dis["id"]] = dis["label"]
    clash_labels = {cp["id"]: cp["label"] for cp in structure}

    if client is None:
        for block in blocks:
            lowered = block.text.lower()
            for cp_id, label in clash_labels.items():
                if label.lower() in lowered:
                    block.clash_point_ids.add(cp_id)
            for dis_id, label in dis_labels.items():
                if label.lower() in lowered:
                    block.disagreement_ids.add(dis_id)
    else:
        def ask(block: PipelineBlock):
            prompt = _ASSIGN_PROMPT.format(clash_ids=", ".join(clash_ids),
                                           dis_ids=", ".join(sorted(parent)),
                                           text=block.text)
            obj = client.complete_json(f"assign:{block.id}", prompt)
            if not isinstance(obj, dict):
                raise LlmOutputUnparsable(f"assign:{block.id}: expected object")
            cps = obj.get("clashPointIds", [])
            diss = obj.get("disagreementIds", [])
            if (not all(c in clash_labels for c in cps)
                    or not all(d in parent for d in diss)):
                raise LlmOutputUnparsable(
                    f"assign:{block.id}: unknown ids in {cps!r}/{diss!r}")
            return set(cps), set(diss)

        results = _ordered_map(blocks, ask, parallelism)
        for block, (cps, diss) in zip(blocks, results):
            block.clash_point_ids.update(cps)
            block.disagreement_ids.update(diss)

    warnings: list[Issue] = []
    for block in blocks:
        for dis_id in sorted(block.disagreement_ids):
            block.clash_point_ids.add(parent[dis_id])
        if block.content_length < short_block_threshold and block.clash_point_ids:
            warnings.append(Issue(
                "ShortBlockAssignmentDropped", block.id,
                f"{block.content_length} content units is under the "
                f"{short_block_threshold}-unit threshold; references removed"))
            block.clash_point_ids.clear()
            block.disagreement_ids.clear()
    return warnings


def build_paths(blocks: list[PipelineBlock], structure: list[dict],
                client: LlmClient | None = None,
                parallelism: int = 4) -> list[Issue]:
    """Populate each disagreement's path and reconcile block references.

    The offline path is every referencing block in chronological order; a
    client may prune it to a subset, which is re-sorted. Blocks pruned off a
    path lose that disagreement reference (their clash reference stays), and
    disagreements no block references are dropped with a warning.
    """
    warnings: list[Issue] = []
    order = {b.id: i for i, b in enumerate(blocks)}
    by_id = {b.id: b for b in blocks}

    jobs = []
    for cp in structure:
        for dis in cp["disagreements"]:
            referencing = [b.id for b in blocks if dis["id"] in b.disagreement_ids]
            jobs.append((cp, dis, referencing))

    def decide(job):
        _cp, dis, referencing = job
        if not referencing or client is None:
            return referencing
        context = "\n".join(f"{b}: {by_id[b].text}" for b in referencing)
        prompt = _PATH_PROMPT.format(dis=dis["id"], blocks=", ".join(referencing),
                                     context=context)
        obj = client.complete_json(f"path:{dis['id']}", prompt)
        if not isinstance(obj, dict) or not isinstance(obj.get("blockIds"), list):
            raise LlmOutputUnparsable(f"path:{dis['id']}: expected blockIds list")
        chosen = obj["blockIds"]
        if not chosen or not set(chosen) <= set(referencing):
            raise LlmOutputUnparsable(
                f"path:{dis['id']}: {chosen!r} is not a nonempty subset of "
                f"{referencing!r}")
        return sorted(set(chosen), key=order.__getitem__)

    paths = _ordered_map(jobs, decide, parallelism if client else 1)

    for (cp, dis, referencing), path in zip(jobs, paths):
        if not path:
            warnings.append(Issue("DisagreementUnreferenced", dis["id"],
                                  "no block references it; dropped"))
            dis["path"] = []
            continue
        dis["path"] = path
        for block_id in referencing:
            if block_id not in path:
                by_id[block_id].disagreement_ids.discard(dis["id"])
    for cp in structure:
        cp["disagreements"] = [d for d in cp["disagreements"] if d["path"]]
    return warnings


def _ordered_map(items, fn, parallelism: int):
    if parallelism <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# whole-transcript orchestration


def annotate_transcript(transcript: dict, client: LlmClient | None = None,
                        catalog: StrategyCatalog | None = None,
                        short_block_threshold: int = model.SHORT_BLOCK_THRESHOLD,
                        segment_sentences: int = FALLBACK_SEGMENT_SENTENCES,
                        parallelism: int = 4) -> tuple[dict, list[Issue]]:
    """Run the full pipeline over a raw transcript; returns (document, warnings).

    The transcript carries sessions/turns with raw text and no blocks. The
    result is a canonical corpus document ready for parsing.
    """
    for key in ("competition", "debaters", "sessions"):
        if key not in transcript:
            raise SchemaViolation(f"transcript missing {key!r}")
    catalog = catalog or _catalog_from(transcript)
    language = transcript["competition"].get("language", "en")
    if "contentMetric" in transcript:
        metric = ContentMetric(
            transcript["contentMetric"]["mode"],
            transcript["contentMetric"].get(
                "wordTokenizer", textutil.default_tokenizer_name(language)))
    else:
        metric = ContentMetric.for_language(language)

    turn_jobs = []
    for session in transcript["sessions"]:
        for turn in session["turns"]:
            turn_jobs.append((session, turn))

    def segment(job):
        session, turn = job
        return segment_turn(turn["text"], client, turn_id=turn["id"],
                            k=segment_sentences)

    segmented = _ordered_map(turn_jobs, segment, parallelism if client else 1)

    blocks: list[PipelineBlock] = []
    blocks_per_turn: dict[str, list[PipelineBlock]] = {}
    for (session, turn), texts in zip(turn_jobs, segmented):
        per_turn = []
        for j, text in enumerate(texts, start=1):
            block = PipelineBlock(
                id=f"{turn['id']}-b{j}", session_id=session["id"],
                turn_id=turn["id"], debater_id=turn["debaterId"], text=text,
                content_length=model.content_length_of(text, metric),
                sentence_count=len(textutil.sentence_spans(text)))
            blocks.append(block)
            per_turn.append(block)
        blocks_per_turn[turn["id"]] = per_turn

    def label(block: PipelineBlock):
        return label_strategies(block.text, catalog, client, block_id=block.id)

    for block, tags in zip(blocks, _ordered_map(blocks, label,
                                                parallelism if client else 1)):
        block.tags = tags

    if client is not None:
        chrono_text = "\n".join(b.text for b in blocks)
        structure = extract_clash_structure(chrono_text, client, metric)
    else:
        structure = normalize_clash_structure(
            transcript.get("clashPoints", []), metric)

    warnings = assign_references(blocks, structure, client,
                                 short_block_threshold, parallelism)
    warnings += build_paths(blocks, structure, client, parallelism)

    doc = {
        "competition": dict(transcript["competition"]),
        "contentMetric": {"mode": metric.mode,
                          "wordTokenizer": metric.word_tokenizer},
        "debaters": [dict(d) for d in transcript["debaters"]],
        "sessions": [{
            "id": session["id"], "index": session["index"],
            "title": session.get("title", session["id"]),
            "turns": [{
                "id": turn["id"], "debaterId": turn["debaterId"],
                "blocks": [{
                    "id": b.id, "text": b.text,
                    "contentLength": b.content_length,
                    "sentenceSpans": [list(span) for span in
                                      model.derive_sentence_spans(
                                          b.sentence_count, b.tags)],
                    "strategyTags": [{"strategyId": t.strategy_id,
                                      "sentenceRange": list(t.sentence_range)}
                                     for t in b.tags],
                    "clashPointIds": sorted(b.clash_point_ids),
                    "disagreementIds": sorted(b.disagreement_ids),
                } for b in blocks_per_turn[turn["id"]]],
            } for turn in session["turns"]],
        } for session in transcript["sessions"]],
        "clashPoints": [{
            "id": cp["id"], "label": cp["label"],
            "disagreements": [{
                "id": d["id"], "label": d["label"],
                "affirmativeViewpoint": d["affirmativeViewpoint"],
                "negativeViewpoint": d["negativeViewpoint"],
                "path": list(d["path"]),
            } for d in cp["disagreements"]],
        } for cp in structure],
        "strategyCatalog": [{"id": e.id, "name": e.name, "iconKey": e.icon_key,
                             "description": e.description}
                            for e in catalog.entries],
    }
    return doc, warnings


def annotate_to_corpus(transcript: dict, client: LlmClient | None = None,
                       **kwargs):
    """annotate_transcript plus parsing; returns (corpus, report, warnings)."""
    from .. import ingest

    doc, warnings = annotate_transcript(transcript, client, **kwargs)
    corpus, report = ingest.corpus_from_document(doc)
    return corpus, report, warnings


def _catalog_from(transcript: dict) -> StrategyCatalog:
    raw = transcript.get("strategyCatalog")
    if not raw:
        return DEFAULT_STRATEGY_CATALOG
    return StrategyCatalog(tuple(
        StrategyEntry(e["id"], e["name"], e["iconKey"], e.get("description", ""))
        for e in raw))
