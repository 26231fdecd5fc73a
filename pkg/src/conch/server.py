"""HTTP API over a corpus: stats, scene graphs, block cards, ingestion.

The store keeps one corpus snapshot at a time and swaps it atomically on
POST, so concurrent readers always see a consistent corpus/index pair.
Scene graphs are cached per (corpus, filter, views) key.
"""
from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from . import analytics, ingest, scene
from .errors import MalformedDocument, UnknownFilterTarget
from .layout.config import LayoutConfig, config_to_dict
from .model import CorpusIndex, DebateCorpus
from .scene import FilterState

_SCENE_CACHE_SIZE = 32

_PROCESS_VIEWS = ("session", "process", "content")
_STRATEGY_VIEWS = ("session", "strategy")


@dataclass(frozen=True)
class Snapshot:
    corpus: DebateCorpus
    index: CorpusIndex
    digest: str
    serialized: str


def _snapshot(corpus: DebateCorpus) -> Snapshot:
    serialized = ingest.serialize_corpus(corpus)
    digest = hashlib.sha256(serialized.encode("utf-8")).hexdigest()
    return Snapshot(corpus, CorpusIndex(corpus), digest, serialized)


class CorpusStore:
    def __init__(self, corpus: DebateCorpus | None = None,
                 config: LayoutConfig | None = None):
        self.config = config or LayoutConfig()
        self.config.validate()
        self._lock = threading.Lock()
        self._snapshot: Snapshot | None = _snapshot(corpus) if corpus else None
        self._scenes: OrderedDict[tuple, dict] = OrderedDict()

    @property
    def snapshot(self) -> Snapshot | None:
        return self._snapshot

    def replace(self, corpus: DebateCorpus) -> Snapshot:
        snap = _snapshot(corpus)
        with self._lock:
            self._snapshot = snap
            self._scenes.clear()
        return snap

    def scene_dict(self, snap: Snapshot, filt: FilterState,
                   views: tuple[str, ...]) -> dict:
        key = (snap.digest, filt.session, filt.turn, filt.block,
               filt.clash_point, filt.chord_color_mode, views)
        with self._lock:
            if key in self._scenes:
                self._scenes.move_to_end(key)
                return self._scenes[key]
        graph = scene.build_scene(snap.corpus, self.config, filt,
                                  views=views, index=snap.index)
        payload = graph.to_dict()
        with self._lock:
            self._scenes[key] = payload
            while len(self._scenes) > _SCENE_CACHE_SIZE:
                self._scenes.popitem(last=False)
        return payload


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"detail": message, **extra}, status_code=status)


def create_app(corpus: DebateCorpus | None = None,
               config: LayoutConfig | None = None) -> FastAPI:
    app = FastAPI(title="conch", docs_url=None, redoc_url=None)
    store = CorpusStore(corpus, config)
    app.state.store = store

    def need_snapshot() -> Snapshot | None:
        return store.snapshot

    @app.get("/api/health")
    def health():
        snap = need_snapshot()
        return {"status": "ok", "corpusLoaded": snap is not None,
                "corpusDigest": snap.digest if snap else None}

    @app.get("/api/config")
    def get_config():
        return config_to_dict(store.config)

    @app.get("/api/corpus")
    def get_corpus():
        snap = need_snapshot()
        if snap is None:
            return _error(404, "no corpus loaded")
        return Response(snap.serialized, media_type="application/json")

    @app.post("/api/corpus")
    async def post_corpus(request: Request):
        raw = await request.body()
        try:
            doc = ingest.decode_document(raw)
        except MalformedDocument as exc:
            return _error(422, str(exc), report={
                "errors": [{"code": "MalformedDocument", "subject": "$",
                            "message": str(exc)}],
                "warnings": []})
        corpus_obj, report = ingest.corpus_from_document(doc)
        if report.errors:
            return _error(422, "corpus failed validation",
                          report=_report_dict(report))
        snap = store.replace(corpus_obj)
        return {"corpusDigest": snap.digest,
                "warnings": _issues(report.warnings)}

    @app.get("/api/stats")
    def get_stats():
        snap = need_snapshot()
        if snap is None:
            return _error(404, "no corpus loaded")
        return ingest.compute_stats(snap.corpus).to_dict()

    @app.get("/api/clash-points")
    def get_clash_points():
        snap = need_snapshot()
        if snap is None:
            return _error(404, "no corpus loaded")
        interactions = analytics.interactions_from_paths(snap.corpus,
                                                         snap.index)
        per_clash: dict[str, int] = {}
        for it in interactions:
            per_clash[it.clash_point_id] = per_clash.get(it.clash_point_id, 0) + 1
        blocks_per_clash: dict[str, int] = {}
        for block in snap.index.blocks.values():
            for cp_id in block.clash_point_ids:
                blocks_per_clash[cp_id] = blocks_per_clash.get(cp_id, 0) + 1
        out = []
        for cp in snap.corpus.clash_points:
            out.append({
                "id": cp.id, "label": cp.label, "colorKey": cp.color_key,
                "color": scene.palette_color(cp.color_key),
                "blockCount": blocks_per_clash.get(cp.id, 0),
                "interactionCount": per_clash.get(cp.id, 0),
                "disagreements": [
                    {"id": d.id, "label": d.label,
                     "affirmativeViewpoint": d.affirmative_viewpoint,
                     "negativeViewpoint": d.negative_viewpoint,
                     "pathLength": len(d.path.block_ids)}
                    for d in (snap.index.disagreements[i]
                              for i in cp.disagreement_ids)],
            })
        return out

    def scene_endpoint(views: tuple[str, ...], session, turn, block,
                       clash_point, chord_color_mode):
        snap = need_snapshot()
        if snap is None:
            return _error(404, "no corpus loaded")
        filt = FilterState(session=session, turn=turn, block=block,
                           clash_point=clash_point,
                           chord_color_mode=chord_color_mode or "side")
        try:
            filt.validate()
        except ValueError as exc:
            return _error(400, str(exc))
        try:
            return store.scene_dict(snap, filt, views)
        except UnknownFilterTarget as exc:
            return _error(404, str(exc))

    @app.get("/api/scene/process")
    def scene_process(session: str | None = None, turn: str | None = None,
                      block: str | None = None,
                      clashPoint: str | None = None,
                      chordColorMode: str | None = None):
        return scene_endpoint(_PROCESS_VIEWS, session, turn, block,
                              clashPoint, chordColorMode)

    @app.get("/api/scene/strategy")
    def scene_strategy(session: str | None = None, turn: str | None = None,
                       block: str | None = None,
                       clashPoint: str | None = None,
                       chordColorMode: str | None = None):
        return scene_endpoint(_STRATEGY_VIEWS, session, turn, block,
                              clashPoint, chordColorMode)

    @app.get("/api/blocks/{block_id}")
    def get_block(block_id: str, context: str | None = None):
        snap = need_snapshot()
        if snap is None:
            return _error(404, "no corpus loaded")
        if context is None:
            n_context = 0
        else:
            try:
                n_context = int(context)
            except ValueError:
                return _error(400, f"context must be an integer, got {context!r}")
            if n_context < 0:
                return _error(400, "context must be non-negative")
        if block_id not in snap.index.blocks:
            return _error(404, f"unknown block id {block_id!r}")
        session_id = snap.index.session_of_turn[
            snap.index.turn_of_block[block_id]]
        siblings = snap.index.session_blocks[session_id]
        at = siblings.index(block_id)
        before = siblings[max(0, at - n_context):at]
        after = siblings[at + 1:at + 1 + n_context]
        return {
            "card": scene.block_card_record(block_id, snap.index),
            "before": [scene.block_card_record(b, snap.index) for b in before],
            "after": [scene.block_card_record(b, snap.index) for b in after],
        }

    return app


def _issues(items) -> list[dict]:
    return [{"code": i.code, "subject": i.subject, "message": i.message}
            for i in items]


def _report_dict(report) -> dict:
    return {"errors": _issues(report.errors),
            "warnings": _issues(report.warnings)}


def serve(corpus: DebateCorpus | None, config: LayoutConfig | None = None,
          host: str = "127.0.0.1", port: int = 8008) -> None:
    import uvicorn

    uvicorn.run(create_app(corpus, config), host=host, port=port,
                log_level="warning")
