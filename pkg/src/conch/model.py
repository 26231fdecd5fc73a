"""Hierarchical debate data model and referential validation.

Types are frozen dataclasses: immutable after construction and safe to share
across threads. Validation never raises — violations come back as data in a
``ValidationReport``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from . import textutil

#: Blocks shorter than this (in content units) are considered too short to
#: carry clash-point references; the rule is reported as a warning.
SHORT_BLOCK_THRESHOLD = 20

#: Fixed ordered palette for clash-point color keys, assigned in descending
#: order of total reference count.
CLASH_PALETTE = (
    "red", "orange", "yellow", "green", "blue", "purple",
    "teal", "pink", "olive", "cyan", "brown", "magenta",
)


class Side(str, Enum):
    AFFIRMATIVE = "affirmative"
    NEGATIVE = "negative"

    @property
    def color(self) -> str:
        """Fixed rendering color: affirmative is white, negative is black."""
        return "white" if self is Side.AFFIRMATIVE else "black"

    @property
    def letter(self) -> str:
        return "A" if self is Side.AFFIRMATIVE else "N"


@dataclass(frozen=True)
class Debater:
    id: str
    side: Side
    ordinal: int
    display_name: str = ""


def display_identifier(debater: Debater) -> str:
    """Render the canonical speaker identifier, e.g. ``DEBATER A1``."""
    return f"DEBATER {debater.side.letter}{debater.ordinal}"


@dataclass(frozen=True)
class StrategyTag:
    strategy_id: str
    #: inclusive 0-based (start, end) sentence indexes within the block
    sentence_range: tuple[int, int]


@dataclass(frozen=True)
class StrategyEntry:
    id: str
    name: str
    icon_key: str
    description: str = ""


@dataclass(frozen=True)
class StrategyCatalog:
    entries: tuple[StrategyEntry, ...]

    def by_id(self) -> dict[str, StrategyEntry]:
        return {e.id: e for e in self.entries}

    def order(self, strategy_id: str) -> int:
        for i, e in enumerate(self.entries):
            if e.id == strategy_id:
                return i
        return len(self.entries)


@dataclass(frozen=True)
class Block:
    id: str
    session_id: str
    turn_id: str
    debater_id: str
    side: Side
    text: str
    content_length: int
    strategy_tags: tuple[StrategyTag, ...] = ()
    clash_point_ids: frozenset[str] = frozenset()
    disagreement_ids: frozenset[str] = frozenset()
    #: inclusive sentence-index runs partitioning the block's sentences
    sentence_spans: tuple[tuple[int, int], ...] = ()

    def sentence_count(self) -> int:
        return len(textutil.sentence_spans(self.text))


@dataclass(frozen=True)
class Turn:
    id: str
    debater_id: str
    block_ids: tuple[str, ...]


@dataclass(frozen=True)
class Session:
    id: str
    index: int
    title: str
    turn_ids: tuple[str, ...]


@dataclass(frozen=True)
class DisagreementPath:
    block_ids: tuple[str, ...]


@dataclass(frozen=True)
class Disagreement:
    id: str
    clash_point_id: str
    label: str
    affirmative_viewpoint: str
    negative_viewpoint: str
    path: DisagreementPath


@dataclass(frozen=True)
class ClashPoint:
    id: str
    label: str
    color_key: str
    disagreement_ids: tuple[str, ...]


@dataclass(frozen=True)
class Competition:
    name: str
    language: str
    format: str


@dataclass(frozen=True)
class ContentMetric:
    #: "whitespaceTokens" or "graphemes"
    mode: str
    #: phrase tokenizer name from textutil.WORD_TOKENIZERS
    word_tokenizer: str

    MODES = ("whitespaceTokens", "graphemes")

    @staticmethod
    def for_language(language: str) -> "ContentMetric":
        if textutil.is_cjk_language(language):
            return ContentMetric("graphemes", "cjk-bigram")
        return ContentMetric("whitespaceTokens", "whitespace")


@dataclass(frozen=True)
class DebateCorpus:
    competition: Competition
    content_metric: ContentMetric
    debaters: tuple[Debater, ...]
    sessions: tuple[Session, ...]
    turns: tuple[Turn, ...]
    blocks: tuple[Block, ...]
    clash_points: tuple[ClashPoint, ...]
    disagreements: tuple[Disagreement, ...]
    strategy_catalog: StrategyCatalog


# ---------------------------------------------------------------------------
# Indexing and chronology


class CorpusIndex:
    """Id lookup tables and the strict chronological order on blocks.

    Built once per corpus and passed to the analytics/layout operations; the
    corpus itself stays immutable.
    """

    def __init__(self, corpus: DebateCorpus):
        self.corpus = corpus
        self.debaters = {d.id: d for d in corpus.debaters}
        self.sessions = {s.id: s for s in corpus.sessions}
        self.turns = {t.id: t for t in corpus.turns}
        self.blocks = {b.id: b for b in corpus.blocks}
        self.clash_points = {c.id: c for c in corpus.clash_points}
        self.disagreements = {d.id: d for d in corpus.disagreements}
        self.strategies = corpus.strategy_catalog.by_id()

        self.session_of_turn: dict[str, str] = {}
        self.turn_of_block: dict[str, str] = {}
        #: block id -> (session index, turn position, block position)
        self.position: dict[str, tuple[int, int, int]] = {}
        self.session_blocks: dict[str, list[str]] = {}

        order = 0
        self.rank: dict[str, int] = {}
        for session in sorted(corpus.sessions, key=lambda s: s.index):
            block_ids: list[str] = []
            for t_pos, turn_id in enumerate(session.turn_ids):
                self.session_of_turn.setdefault(turn_id, session.id)
                turn = self.turns.get(turn_id)
                if turn is None:
                    continue
                for b_pos, block_id in enumerate(turn.block_ids):
                    self.turn_of_block.setdefault(block_id, turn_id)
                    self.position[block_id] = (session.index, t_pos, b_pos)
                    self.rank[block_id] = order
                    order += 1
                    block_ids.append(block_id)
            self.session_blocks[session.id] = block_ids

    def blocks_chronological(self) -> list[Block]:
        ordered = sorted(self.rank, key=self.rank.__getitem__)
        return [self.blocks[b] for b in ordered if b in self.blocks]

    def precedes(self, a: str, b: str) -> bool:
        return self.rank[a] < self.rank[b]


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Issue:
    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}({self.subject}): {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...]
    warnings: tuple[Issue, ...]

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> set[str]:
        return {i.code for i in self.errors} | {i.code for i in self.warnings}


def content_length_of(text: str, metric: ContentMetric) -> int:
    """Content units of ``text`` under the corpus metric; empty text is 0."""
    if metric.mode == "graphemes":
        return textutil.grapheme_count(text)
    if metric.mode == "whitespaceTokens":
        return len(text.split())
    raise ValueError(f"unknown content metric mode: {metric.mode!r}")


def _phrase_words(text: str, metric: ContentMetric) -> int:
    return textutil.word_count(text, metric.word_tokenizer)


def _check_duplicates(items: Iterable[str], namespace: str, out: list[Issue]) -> None:
    seen: set[str] = set()
    for item in items:
        if item in seen:
            out.append(Issue("DuplicateId", item, f"duplicate {namespace} id"))
        seen.add(item)


def validate_corpus(corpus: DebateCorpus,
                    short_block_threshold: int = SHORT_BLOCK_THRESHOLD) -> ValidationReport:
    """Check every structural invariant; violations are returned, not raised.

    Pure and idempotent: the same corpus always yields an identical report.
    Short blocks carrying clash references are warnings, everything else that
    breaks an invariant is an error.
    """
    errors: list[Issue] = []
    warnings: list[Issue] = []

    _check_duplicates((d.id for d in corpus.debaters), "debater", errors)
    _check_duplicates((s.id for s in corpus.sessions), "session", errors)
    _check_duplicates((t.id for t in corpus.turns), "turn", errors)
    _check_duplicates((b.id for b in corpus.blocks), "block", errors)
    _check_duplicates((c.id for c in corpus.clash_points), "clash point", errors)
    _check_duplicates((d.id for d in corpus.disagreements), "disagreement", errors)
    _check_duplicates((e.id for e in corpus.strategy_catalog.entries), "strategy", errors)
    _check_duplicates((e.icon_key for e in corpus.strategy_catalog.entries),
                      "strategy icon", errors)

    debaters = {d.id: d for d in corpus.debaters}
    sessions = {s.id: s for s in corpus.sessions}
    turns = {t.id: t for t in corpus.turns}
    blocks = {b.id: b for b in corpus.blocks}
    clash_points = {c.id: c for c in corpus.clash_points}
    disagreements = {d.id: d for d in corpus.disagreements}
    strategies = corpus.strategy_catalog.by_id()

    # exactly two sides, ordinals contiguous from 1 within each side
    for side in Side:
        ordinals = sorted(d.ordinal for d in corpus.debaters if d.side is side)
        if not ordinals:
            errors.append(Issue("MissingSide", side.value, "side has no debaters"))
        elif ordinals != list(range(1, len(ordinals) + 1)):
            errors.append(Issue("OrdinalGap", side.value,
                                f"ordinals {ordinals} are not contiguous from 1"))

    indexes = [s.index for s in corpus.sessions]
    if indexes != sorted(set(indexes)):
        errors.append(Issue("SessionOrder", "sessions",
                            "session indexes must be unique and ascending"))

    # containment: each turn in exactly one session, each block in one turn
    turn_owner: dict[str, str] = {}
    for session in corpus.sessions:
        if not session.turn_ids:
            errors.append(Issue("EmptySession", session.id, "session holds no turns"))
        for turn_id in session.turn_ids:
            if turn_id not in turns:
                errors.append(Issue("DanglingReference", turn_id,
                                    f"session {session.id} lists unknown turn"))
            elif turn_id in turn_owner:
                errors.append(Issue("SharedTurn", turn_id,
                                    f"turn appears in sessions {turn_owner[turn_id]} and {session.id}"))
            else:
                turn_owner[turn_id] = session.id
    for turn in corpus.turns:
        if turn.id not in turn_owner:
            errors.append(Issue("OrphanTurn", turn.id, "turn belongs to no session"))

    block_owner: dict[str, str] = {}
    for turn in corpus.turns:
        if not turn.block_ids:
            errors.append(Issue("EmptyTurn", turn.id, "turn holds no blocks"))
        if turn.debater_id not in debaters:
            errors.append(Issue("DanglingReference", turn.debater_id,
                                f"turn {turn.id} names unknown debater"))
        for block_id in turn.block_ids:
            if block_id not in blocks:
                errors.append(Issue("DanglingReference", block_id,
                                    f"turn {turn.id} lists unknown block"))
            elif block_id in block_owner:
                errors.append(Issue("SharedBlock", block_id,
                                    f"block appears in turns {block_owner[block_id]} and {turn.id}"))
            else:
                block_owner[block_id] = turn.id
    for block in corpus.blocks:
        if block.id not in block_owner:
            errors.append(Issue("OrphanBlock", block.id, "block belongs to no turn"))

    # block-level invariants
    for block in corpus.blocks:
        owner = block_owner.get(block.id)
        if owner is not None and block.turn_id != owner:
            errors.append(Issue("TurnMismatch", block.id,
                                f"block records turn {block.turn_id} but lives in {owner}"))
        if owner is not None:
            session_id = turn_owner.get(owner)
            if session_id is not None and block.session_id != session_id:
                errors.append(Issue("SessionMismatch", block.id,
                                    f"block records session {block.session_id} but lives in {session_id}"))
        if block.debater_id in debaters and debaters[block.debater_id].side is not block.side:
            errors.append(Issue("SideMismatch", block.id,
                                "block side differs from its debater's side"))

        expected = content_length_of(block.text, corpus.content_metric)
        if block.content_length != expected:
            errors.append(Issue("ContentLengthMismatch", block.id,
                                f"stored {block.content_length}, computed {expected}"))

        n_sentences = block.sentence_count()
        spans = block.sentence_spans
        if spans:
            flat_ok = all(0 <= a <= b < n_sentences for a, b in spans)
            contiguous = all(spans[i + 1][0] == spans[i][1] + 1 for i in range(len(spans) - 1))
            covers = spans[0][0] == 0 and spans[-1][1] == n_sentences - 1
            if not (flat_ok and contiguous and covers):
                errors.append(Issue("SentenceSpanViolation", block.id,
                                    f"spans {list(spans)} do not partition {n_sentences} sentences"))
        elif n_sentences:
            errors.append(Issue("SentenceSpanViolation", block.id,
                                "block has sentences but no spans"))

        for tag in block.strategy_tags:
            if tag.strategy_id not in strategies:
                errors.append(Issue("DanglingReference", tag.strategy_id,
                                    f"block {block.id} tags unknown strategy"))
            a, b = tag.sentence_range
            if not (0 <= a <= b < max(n_sentences, 1)):
                errors.append(Issue("TagRangeViolation", block.id,
                                    f"tag range [{a},{b}] outside {n_sentences} sentences"))

        for cp_id in sorted(block.clash_point_ids):
            if cp_id not in clash_points:
                errors.append(Issue("DanglingReference", cp_id,
                                    f"block {block.id} references unknown clash point"))
        for d_id in sorted(block.disagreement_ids):
            if d_id not in disagreements:
                errors.append(Issue("DanglingReference", d_id,
                                    f"block {block.id} references unknown disagreement"))
            else:
                parent = disagreements[d_id].clash_point_id
                if parent not in block.clash_point_ids:
                    errors.append(Issue("MissingParentClash", block.id,
                                        f"disagreement {d_id} implies clash point {parent}"))

        if block.content_length < short_block_threshold and block.clash_point_ids:
            warnings.append(Issue("ShortBlockClashReference", block.id,
                                  f"{block.content_length} content units is below the "
                                  f"{short_block_threshold}-unit clash threshold"))

    # clash points and disagreements
    metric = corpus.content_metric
    color_keys: set[str] = set()
    for cp in corpus.clash_points:
        words = _phrase_words(cp.label, metric)
        if not 2 <= words <= 4:
            errors.append(Issue("PhraseLength", cp.id,
                                f"clash label {cp.label!r} has {words} words, need 2-4"))
        if cp.color_key in color_keys:
            errors.append(Issue("ColorKeyCollision", cp.id,
                                f"color key {cp.color_key!r} reused"))
        color_keys.add(cp.color_key)
        for d_id in cp.disagreement_ids:
            if d_id not in disagreements:
                errors.append(Issue("DanglingReference", d_id,
                                    f"clash point {cp.id} lists unknown disagreement"))
            elif disagreements[d_id].clash_point_id != cp.id:
                errors.append(Issue("ParentMismatch", d_id,
                                    f"disagreement claims parent {disagreements[d_id].clash_point_id}"))

    index = CorpusIndex(corpus)
    for dis in corpus.disagreements:
        words = _phrase_words(dis.label, metric)
        if not 2 <= words <= 3:
            errors.append(Issue("PhraseLength", dis.id,
                                f"disagreement label {dis.label!r} has {words} words, need 2-3"))
        for name, viewpoint in (("affirmative", dis.affirmative_viewpoint),
                                ("negative", dis.negative_viewpoint)):
            if _phrase_words(viewpoint, metric) != 1:
                errors.append(Issue("ViewpointNotSingleWord", dis.id,
                                    f"{name} viewpoint {viewpoint!r} is not a single word"))
        if dis.clash_point_id not in clash_points:
            errors.append(Issue("DanglingReference", dis.clash_point_id,
                                f"disagreement {dis.id} names unknown clash point"))
        elif dis.id not in clash_points[dis.clash_point_id].disagreement_ids:
            errors.append(Issue("ParentMismatch", dis.id,
                                f"clash point {dis.clash_point_id} does not list it"))

        path = dis.path.block_ids
        if not path:
            errors.append(Issue("EmptyPath", dis.id, "path holds no blocks"))
        on_path: set[str] = set()
        last_rank = -1
        for block_id in path:
            if block_id not in blocks or block_id not in index.rank:
                errors.append(Issue("DanglingReference", block_id,
                                    f"path of {dis.id} lists unknown block"))
                continue
            rank = index.rank[block_id]
            if rank <= last_rank:
                errors.append(Issue("PathOrderViolation", dis.id,
                                    f"block {block_id} out of chronological order"))
            last_rank = rank
            on_path.add(block_id)
            if dis.id not in blocks[block_id].disagreement_ids:
                errors.append(Issue("PathReferenceMismatch", block_id,
                                    f"on path of {dis.id} but does not reference it"))
        for block in corpus.blocks:
            if dis.id in block.disagreement_ids and block.id not in on_path:
                errors.append(Issue("PathReferenceMismatch", block.id,
                                    f"references {dis.id} but is absent from its path"))

    return ValidationReport(tuple(errors), tuple(warnings))


def derive_sentence_spans(sentence_count: int,
                          tags: Iterable[StrategyTag]) -> tuple[tuple[int, int], ...]:
    """Partition sentences into runs whose boundaries are tag-range edges.

    Used when a document carries no explicit spans: segmentation follows the
    sentences where strategies start or stop applying.
    """
    if sentence_count <= 0:
        return ()
    cuts = {0, sentence_count}
    for tag in tags:
        a, b = tag.sentence_range
        cuts.add(max(0, min(a, sentence_count)))
        cuts.add(min(b + 1, sentence_count))
    edges = sorted(cuts)
    return tuple((edges[i], edges[i + 1] - 1) for i in range(len(edges) - 1))


def assign_color_keys(reference_counts: Mapping[str, int]) -> dict[str, str]:
    """Map clash-point ids to palette slots, busiest clash point first."""
    ranked = sorted(reference_counts, key=lambda c: (-reference_counts[c], c))
    keys: dict[str, str] = {}
    for i, cp_id in enumerate(ranked):
        if i < len(CLASH_PALETTE):
            keys[cp_id] = CLASH_PALETTE[i]
        else:
            keys[cp_id] = f"palette-{i}"
    return keys
