"""Bundled corpus fixtures."""
from __future__ import annotations

import json
from importlib import resources


def fixture_bytes(name: str) -> bytes:
    return (resources.files(__package__) / name).read_bytes()


def fixture_json(name: str) -> dict:
    return json.loads(fixture_bytes(name).decode("utf-8"))


def fixture_names() -> list[str]:
    root = resources.files(__package__)
    return sorted(entry.name for entry in root.iterdir()
                  if entry.name.endswith(".json"))
