"""Derived quantities the layouts consume.

Everything here is a pure function of an immutable corpus; results are
deterministic and independent of evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import CorpusIndex, DebateCorpus, Side


@dataclass(frozen=True)
class Interaction:
    disagreement_id: str
    clash_point_id: str
    from_block_id: str
    to_block_id: str
    same_side: bool


@dataclass(frozen=True)
class CooccurrenceRecord:
    session_id: str
    side: Side
    strategy_ids: frozenset[str]
    block_id: str


def interactions_from_paths(corpus: DebateCorpus,
                            index: CorpusIndex | None = None) -> list[Interaction]:
    """One interaction per consecutive block pair on each disagreement path."""
    index = index or CorpusIndex(corpus)
    out: list[Interaction] = []
    for dis in corpus.disagreements:
        path = dis.path.block_ids
        for a, b in zip(path, path[1:]):
            out.append(Interaction(
                disagreement_id=dis.id,
                clash_point_id=dis.clash_point_id,
                from_block_id=a,
                to_block_id=b,
                same_side=index.blocks[a].side is index.blocks[b].side))
    return out


def clash_point_shares(session_id: str, corpus: DebateCorpus,
                       index: CorpusIndex | None = None,
                       weight: str = "blocks") -> list[tuple[str, float]]:
    """Session's clash-point shares, descending, block-count weighted.

    weight="content" switches the numerator to block content lengths; the
    default follows block counts.
    """
    index = index or CorpusIndex(corpus)
    counts: dict[str, float] = {}
    for block_id in index.session_blocks[session_id]:
        block = index.blocks[block_id]
        w = block.content_length if weight == "content" else 1
        for cp_id in block.clash_point_ids:
            counts[cp_id] = counts.get(cp_id, 0) + w
    total = sum(counts.values())
    if not total:
        return []
    ranked = sorted(counts, key=lambda c: (-counts[c], c))
    return [(c, counts[c] / total) for c in ranked]


def disagreement_block_counts(session_id: str, corpus: DebateCorpus,
                              index: CorpusIndex | None = None) -> list[tuple[str, int]]:
    """Blocks of this session per disagreement; zero-count entries omitted."""
    index = index or CorpusIndex(corpus)
    counts: dict[str, int] = {}
    for block_id in index.session_blocks[session_id]:
        for d_id in index.blocks[block_id].disagreement_ids:
            counts[d_id] = counts.get(d_id, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def strategy_usage(corpus: DebateCorpus,
                   index: CorpusIndex | None = None) -> dict[tuple[str, str, Side], int]:
    """Tag-instance counts keyed by (sessionId, strategyId, side)."""
    index = index or CorpusIndex(corpus)
    usage: dict[tuple[str, str, Side], int] = {}
    for block in corpus.blocks:
        for tag in block.strategy_tags:
            key = (block.session_id, tag.strategy_id, block.side)
            usage[key] = usage.get(key, 0) + 1
    return usage


def peak_usage(usage: dict[tuple[str, str, Side], int]) -> dict[str, int]:
    """Per strategy: max over sessions of the both-side session total.

    Strategies with zero total usage carry no entry and so are excluded from
    the strategy layout entirely.
    """
    session_totals: dict[tuple[str, str], int] = {}
    for (session_id, strategy_id, _side), count in usage.items():
        key = (strategy_id, session_id)
        session_totals[key] = session_totals.get(key, 0) + count
    peaks: dict[str, int] = {}
    for (strategy_id, _session_id), total in session_totals.items():
        if total > peaks.get(strategy_id, 0):
            peaks[strategy_id] = total
    return {s: p for s, p in peaks.items() if p > 0}


def cooccurrence(corpus: DebateCorpus) -> list[CooccurrenceRecord]:
    """One record per block tagged with two or more distinct strategies."""
    out = []
    for block in corpus.blocks:
        distinct = frozenset(tag.strategy_id for tag in block.strategy_tags)
        if len(distinct) >= 2:
            out.append(CooccurrenceRecord(block.session_id, block.side, distinct, block.id))
    return out


def cooccurrence_groups(records: list[CooccurrenceRecord],
                        ) -> dict[tuple[str, Side, frozenset[str]], list[str]]:
    """Group records by (session, side, strategy set); values keep multiplicity."""
    groups: dict[tuple[str, Side, frozenset[str]], list[str]] = {}
    for record in records:
        key = (record.session_id, record.side, record.strategy_ids)
        groups.setdefault(key, []).append(record.block_id)
    return groups


def side_proportions(session_id: str, corpus: DebateCorpus,
                     index: CorpusIndex | None = None) -> tuple[float, float]:
    """(affirmative, negative) content shares of the session; sum to 1."""
    index = index or CorpusIndex(corpus)
    aff = neg = 0
    for block_id in index.session_blocks[session_id]:
        block = index.blocks[block_id]
        if block.side is Side.AFFIRMATIVE:
            aff += block.content_length
        else:
            neg += block.content_length
    total = aff + neg
    if not total:
        return (0.5, 0.5)
    return (aff / total, neg / total)
