"""Regenerate the SVG rendering goldens from the demo fixtures.

Run from the repository root:  python3 tools/regen_goldens.py
Review the diff before committing; goldens are compared byte-for-byte.
"""
from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from conch import ingest, svgout  # noqa: E402
from conch.fixtures import fixture_bytes  # noqa: E402
from conch.layout.config import LayoutConfig  # noqa: E402
from conch.scene import FilterState, build_scene  # noqa: E402

GOLDEN = pathlib.Path(__file__).resolve().parents[1] / "tests/golden"

CASES = (
    ("demo_small", FilterState()),
    ("demo_clash", FilterState(clash_point="cp1")),
)


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, filt in CASES:
        corpus = ingest.parse_corpus(fixture_bytes(f"{name}.json"))
        svg = svgout.render_svg(build_scene(corpus, LayoutConfig(), filt))
        out = GOLDEN / f"{name}.svg"
        out.write_text(svg, encoding="utf-8")
        print(f"{out.name}: {len(svg)} bytes")


if __name__ == "__main__":
    main()
