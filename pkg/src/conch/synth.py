"""Seeded synthetic corpus generation for tests and demos.

Documents produced here always parse cleanly and satisfy every validation
rule: labels respect phrase-length limits under the corpus tokenizer, every
disagreement path lists exactly the blocks that reference it in
chronological order, and block texts are long enough to stay above the
short-block threshold.
"""
from __future__ import annotations

import random

from . import ingest, textutil
from .annotate.pipeline import DEFAULT_STRATEGY_CATALOG
from .model import DebateCorpus

_WORDS = (
    "tariff", "subsidy", "growth", "carbon", "market", "labor", "deficit",
    "housing", "grid", "treaty", "quota", "audit", "pension", "fusion",
    "harbor", "census", "patent", "tribunal", "ledger", "transit", "biomass",
    "orbit", "famine", "drought", "capital", "union", "cartel", "hazard",
    "revenue", "border", "clinic", "syllabus", "verdict", "statute", "canal",
    "mineral", "widget", "summit", "export", "permit",
)

_CJK_CHARS = "经济增长市场劳工赤字住房电网条约配额审计养老聚变港口普查专利法庭账本运输生物轨道饥荒干旱资本工会危害收入边境诊所裁决法规运河矿物部件峰会出口许可"


def _phrase(rng: random.Random, tokenizer: str, lo: int, hi: int,
            cjk: bool) -> str:
    """A phrase whose word count under the tokenizer lands in [lo, hi]."""
    lengths = list(range(1, 14))
    rng.shuffle(lengths)
    for length in lengths:
        candidate = (
            "".join(rng.choice(_CJK_CHARS) for _ in range(length)) if cjk
            else " ".join(rng.choice(_WORDS) for _ in range(length)))
        if lo <= textutil.word_count(candidate, tokenizer) <= hi:
            return candidate
    raise AssertionError(f"no phrase length 1-13 yields {lo}-{hi} words")


def _sentence(rng: random.Random, cjk: bool) -> str:
    if cjk:
        n = rng.randint(12, 20)
        return "".join(rng.choice(_CJK_CHARS) for _ in range(n)) + "。"
    n = rng.randint(7, 12)
    words = [rng.choice(_WORDS) for _ in range(n)]
    return " ".join(words).capitalize() + "."


def _block_text(rng: random.Random, cjk: bool) -> str:
    n_sent = rng.randint(3, 5)
    joiner = "" if cjk else " "
    return joiner.join(_sentence(rng, cjk) for _ in range(n_sent))


def make_document(seed: int = 0, *, n_sessions: int | None = None,
                  blocks_per_session: tuple[int, int] = (2, 6),
                  n_debaters: int | None = None,
                  n_clash_points: int | None = None,
                  language: str = "en",
                  cross_side_bias: float = 0.5,
                  turns_per_session: tuple[int, ...] | None = None,
                  blocks_per_turn: tuple[int, int] = (1, 3),
                  competition_name: str | None = None) -> dict:
    rng = random.Random(seed)
    cjk = textutil.is_cjk_language(language)
    tokenizer = textutil.default_tokenizer_name(language)
    if turns_per_session is not None:
        n_sessions = len(turns_per_session)
    elif n_sessions is None:
        n_sessions = rng.randint(2, 6)
    if n_debaters is None:
        n_debaters = rng.choice((2, 4, 6, 8))

    debaters = []
    for i in range(n_debaters):
        side = "affirmative" if i % 2 == 0 else "negative"
        debaters.append({"id": f"deb{i + 1}", "side": side,
                         "ordinal": i // 2 + 1,
                         "displayName": f"Debater {i + 1}"})
    by_side = {"affirmative": [d for d in debaters if d["side"] == "affirmative"],
               "negative": [d for d in debaters if d["side"] == "negative"]}

    sessions = []
    chronological: list[dict] = []  # {"id", "side"} in global order
    block_counter = 0
    for si in range(n_sessions):
        session_id = f"s{si + 1}"
        if turns_per_session is not None:
            turn_blocks = [rng.randint(*blocks_per_turn)
                           for _ in range(turns_per_session[si])]
        else:
            n_blocks = rng.randint(*blocks_per_session)
            n_turns = rng.randint(1, max(1, min(4, n_blocks)))
            # spread blocks over turns, each turn nonempty
            split = sorted(rng.sample(range(1, n_blocks), n_turns - 1)) \
                if n_turns > 1 else []
            bounds = [0] + split + [n_blocks]
            turn_blocks = [bounds[t + 1] - bounds[t] for t in range(n_turns)]
        turns = []
        for ti, count in enumerate(turn_blocks):
            side = "affirmative" if ti % 2 == 0 else "negative"
            debater = rng.choice(by_side[side])
            turn_id = f"{session_id}-t{ti + 1}"
            blocks = []
            for _ in range(count):
                block_counter += 1
                block_id = f"b{block_counter}"
                text = _block_text(rng, cjk)
                n_sent = len(textutil.sentence_spans(text))
                tags = []
                if rng.random() < 0.8:
                    entry = rng.choice(DEFAULT_STRATEGY_CATALOG.entries)
                    a = rng.randrange(n_sent)
                    b = min(n_sent - 1, a + rng.randint(0, 1))
                    tags.append({"strategyId": entry.id,
                                 "sentenceRange": [a, b]})
                    if rng.random() < 0.35 and b + 1 < n_sent:
                        other = rng.choice(DEFAULT_STRATEGY_CATALOG.entries)
                        tags.append({"strategyId": other.id,
                                     "sentenceRange": [b + 1, n_sent - 1]})
                blocks.append({"id": block_id, "text": text,
                               "strategyTags": tags,
                               "clashPointIds": [], "disagreementIds": []})
                chronological.append({"id": block_id, "side": side,
                                      "doc": blocks[-1]})
            turns.append({"id": turn_id, "debaterId": debater["id"],
                          "blocks": blocks})
        sessions.append({"id": session_id, "index": si + 1,
                         "title": _phrase(rng, tokenizer, 2, 3, cjk),
                         "turns": turns})

    total_blocks = len(chronological)
    if n_clash_points is None:
        n_clash_points = rng.randint(1, max(1, min(5, total_blocks // 2)))

    clash_points = []
    for ci in range(n_clash_points):
        cp_id = f"cp{ci + 1}"
        disagreements = []
        for di in range(rng.randint(1, 3)):
            dis_id = f"{cp_id}-d{di + 1}"
            path = _pick_path(rng, chronological, cross_side_bias)
            for record in path:
                record["doc"]["disagreementIds"].append(dis_id)
                if cp_id not in record["doc"]["clashPointIds"]:
                    record["doc"]["clashPointIds"].append(cp_id)
            disagreements.append({
                "id": dis_id,
                "label": _phrase(rng, tokenizer, 2, 3, cjk),
                "affirmativeViewpoint": _phrase(rng, tokenizer, 1, 1, cjk),
                "negativeViewpoint": _phrase(rng, tokenizer, 1, 1, cjk),
                "path": [r["id"] for r in path],
            })
        clash_points.append({"id": cp_id,
                             "label": _phrase(rng, tokenizer, 2, 4, cjk),
                             "disagreements": disagreements})

    # clash-only references so ring shares differ from disagreement counts
    for record in chronological:
        if rng.random() < 0.2:
            cp = rng.choice(clash_points)
            if cp["id"] not in record["doc"]["clashPointIds"]:
                record["doc"]["clashPointIds"].append(cp["id"])

    metric_mode = "graphemes" if cjk else "whitespaceTokens"
    name = competition_name or f"Synthetic Cup {seed}"
    return {
        "competition": {"name": name, "language": language,
                        "format": f"{n_debaters // 2}v{n_debaters // 2}"},
        "contentMetric": {"mode": metric_mode, "wordTokenizer": tokenizer},
        "debaters": debaters,
        "sessions": sessions,
        "clashPoints": clash_points,
        "strategyCatalog": [
            {"id": e.id, "name": e.name, "iconKey": e.icon_key,
             "description": e.description}
            for e in DEFAULT_STRATEGY_CATALOG.entries],
    }


def _pick_path(rng: random.Random, chronological: list[dict],
               cross_side_bias: float) -> list[dict]:
    """Strictly chronological block subsequence; consecutive picks cross
    sides with probability cross_side_bias when a candidate exists."""
    total = len(chronological)
    length = rng.randint(1 if total == 1 else 2, min(6, total))
    start = rng.randrange(0, max(1, total - length + 1))
    path = [chronological[start]]
    cursor = start
    while len(path) < length and cursor + 1 < total:
        want_cross = rng.random() < cross_side_bias
        current_side = path[-1]["side"]
        later = chronological[cursor + 1:]
        pool = [r for r in later
                if (r["side"] != current_side) == want_cross]
        chosen = pool[0] if pool else later[0]
        cursor = chronological.index(chosen, cursor + 1)
        path.append(chosen)
    return path


def make_corpus(seed: int = 0, **kwargs) -> DebateCorpus:
    """Parsed, validation-clean corpus; raises if generation broke a rule."""
    doc = make_document(seed, **kwargs)
    corpus, report = ingest.corpus_from_document(doc)
    if report.errors:
        raise AssertionError(
            f"synthetic corpus seed={seed} invalid: "
            + "; ".join(f"{i.code}:{i.subject}" for i in report.errors))
    return corpus
