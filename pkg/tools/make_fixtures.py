"""Regenerate the bundled corpus fixtures and their manifests.

Run from the repository root:  python3 tools/make_fixtures.py
"""
from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from conch import ingest, synth  # noqa: E402

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src/conch/fixtures"


def write(name: str, doc: dict, manifest: bool) -> None:
    corpus, report = ingest.corpus_from_document(doc)
    assert not report.errors, [f"{i.code}:{i.subject}" for i in report.errors]
    text = json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
    (FIXTURES / f"{name}.json").write_text(text, encoding="utf-8")
    print(f"{name}.json: {len(text)} bytes")
    if manifest:
        stats = ingest.compute_stats(corpus).to_dict()
        payload = {key: stats[key] for key in (
            "debaterCount", "sessionCount", "turnCount", "blockCount",
            "totalContentLength")}
        (FIXTURES / f"{name}.manifest.json").write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"{name}.manifest.json: {payload}")


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    # 13 sessions of 14 turns except a 13-turn final; 8 debaters; CJK text
    write("icdi_shape", synth.make_document(
        seed=20240, language="zh", n_debaters=8,
        turns_per_session=tuple([14] * 12 + [13]), blocks_per_turn=(1, 2),
        n_clash_points=6, cross_side_bias=0.55,
        competition_name="Intercity Debate Invitational"), manifest=True)

    # 8 sessions of one turn each; 6 debaters; English text
    write("nsdt_shape", synth.make_document(
        seed=20241, language="en", n_debaters=6,
        turns_per_session=(1,) * 8, blocks_per_turn=(2, 4),
        n_clash_points=4, cross_side_bias=0.5,
        competition_name="National Schools Debate Series"), manifest=True)

    # small demos used by the rendering goldens
    write("demo_small", synth.make_document(
        seed=11, language="en", n_sessions=3, blocks_per_session=(2, 4),
        n_debaters=4, n_clash_points=2, cross_side_bias=0.6,
        competition_name="Demo Exhibition"), manifest=False)
    write("demo_clash", synth.make_document(
        seed=23, language="en", n_sessions=4, blocks_per_session=(3, 5),
        n_debaters=4, n_clash_points=3, cross_side_bias=0.8,
        competition_name="Demo Clash Night"), manifest=False)


if __name__ == "__main__":
    main()
