import json

import pytest
from fastapi.testclient import TestClient

from conch.fixtures import fixture_bytes
from conch.ingest import parse_corpus, serialize_corpus
from conch.server import create_app
from conch.synth import make_document

from conftest import mutate


@pytest.fixture()
def client(hand_corpus):
    app = create_app(hand_corpus)
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def empty_client():
    with TestClient(create_app()) as c:
        yield c


class TestHealthAndCorpus:
    def test_health(self, client):
        body = client.get("/api/health").json()
        assert body["status"] == "ok"
        assert body["corpusLoaded"] is True
        assert len(body["corpusDigest"]) == 64

    def test_health_without_corpus(self, empty_client):
        body = empty_client.get("/api/health").json()
        assert body["corpusLoaded"] is False
        assert body["corpusDigest"] is None

    def test_get_corpus_round_trips(self, client, hand_corpus):
        res = client.get("/api/corpus")
        assert res.status_code == 200
        assert parse_corpus(res.content) == hand_corpus

    def test_get_corpus_404_when_empty(self, empty_client):
        assert empty_client.get("/api/corpus").status_code == 404

    def test_config_endpoint(self, client):
        body = client.get("/api/config").json()
        assert body["chordCircleRadius"] == 60.0
        assert set(body) >= {"rhoMin", "rhoMax", "sMin", "sMax"}


class TestStats:
    def test_stats_shape(self, client):
        body = client.get("/api/stats").json()
        assert body["sessionCount"] == 2
        assert body["turnCount"] == 4
        assert body["blockCount"] == 5
        assert body["totalContentLength"] == 135
        assert body["perSide"] == {"affirmative": 87, "negative": 48}

    def test_clash_points_listing(self, client):
        body = client.get("/api/clash-points").json()
        assert [c["id"] for c in body] == ["cp1", "cp2"]
        cp1 = body[0]
        assert cp1["color"] == "#d62728"
        assert cp1["interactionCount"] == 3
        assert {d["id"]: d["pathLength"] for d in cp1["disagreements"]} == \
            {"cp1-d1": 3, "cp1-d2": 2}


class TestSceneEndpoints:
    def test_process_scene(self, client):
        res = client.get("/api/scene/process")
        assert res.status_code == 200
        body = res.json()
        assert sorted(body["meta"]) == ["counts", "filter", "highlights",
                                        "legend", "palette", "scrollTarget",
                                        "views", "warnings"]
        assert body["meta"]["views"] == ["session", "process", "content"]
        assert body["root"]["kind"] == "group"

    def test_strategy_scene_views(self, client):
        body = client.get("/api/scene/strategy").json()
        assert body["meta"]["views"] == ["session", "strategy"]

    def test_filters_flow_through(self, client):
        body = client.get("/api/scene/process",
                          params={"clashPoint": "cp2"}).json()
        assert body["meta"]["filter"]["clashPoint"] == "cp2"
        assert body["meta"]["filter"]["chordColorMode"] == "clash"
        assert body["meta"]["counts"]["chords"] == 1

    def test_unknown_filter_target_404(self, client):
        res = client.get("/api/scene/process", params={"block": "zz"})
        assert res.status_code == 404

    def test_bad_color_mode_400(self, client):
        res = client.get("/api/scene/process",
                         params={"chordColorMode": "purple"})
        assert res.status_code == 400

    def test_scene_cache_stable(self, client):
        a = client.get("/api/scene/process", params={"block": "b2"})
        b = client.get("/api/scene/process", params={"block": "b2"})
        assert a.content == b.content

    def test_scene_404_without_corpus(self, empty_client):
        assert empty_client.get("/api/scene/process").status_code == 404


class TestBlockCards:
    def test_card_with_context(self, client):
        body = client.get("/api/blocks/b2", params={"context": 1}).json()
        assert body["card"]["blockId"] == "b2"
        assert [c["blockId"] for c in body["before"]] == ["b1"]
        assert [c["blockId"] for c in body["after"]] == ["b3"]

    def test_context_clipped_at_session_edge(self, client):
        body = client.get("/api/blocks/b1", params={"context": 5}).json()
        assert body["before"] == []
        assert [c["blockId"] for c in body["after"]] == ["b2", "b3"]

    def test_default_context_zero(self, client):
        body = client.get("/api/blocks/b4").json()
        assert body["before"] == [] and body["after"] == []

    def test_bad_context_400(self, client):
        assert client.get("/api/blocks/b2",
                          params={"context": "two"}).status_code == 400
        assert client.get("/api/blocks/b2",
                          params={"context": -1}).status_code == 400

    def test_unknown_block_404(self, client):
        assert client.get("/api/blocks/zz").status_code == 404


class TestPostCorpus:
    def test_replaces_corpus_and_digest(self, client):
        old = client.get("/api/health").json()["corpusDigest"]
        doc = make_document(5)
        res = client.post("/api/corpus", content=json.dumps(doc))
        assert res.status_code == 200
        body = res.json()
        assert body["corpusDigest"] != old
        assert client.get("/api/health").json()["corpusDigest"] == \
            body["corpusDigest"]
        stats = client.get("/api/stats").json()
        assert stats["blockCount"] == len(
            [b for s in doc["sessions"] for t in s["turns"]
             for b in t["blocks"]])

    def test_scene_reflects_new_corpus(self, client):
        doc = make_document(6)
        client.post("/api/corpus", content=json.dumps(doc))
        body = client.get("/api/scene/process").json()
        assert body["meta"]["counts"]["sessions"] == len(doc["sessions"])

    def test_invalid_document_422_with_report(self, client, hand_doc):
        bad = mutate(hand_doc, lambda d: d["debaters"].append(
            dict(d["debaters"][0])))
        res = client.post("/api/corpus", content=json.dumps(bad))
        assert res.status_code == 422
        codes = {e["code"] for e in res.json()["report"]["errors"]}
        assert "DuplicateId" in codes
        # failed upload must not clobber the loaded corpus
        assert client.get("/api/stats").json()["blockCount"] == 5

    def test_malformed_body_422(self, client):
        res = client.post("/api/corpus", content=b"not json")
        assert res.status_code == 422
        codes = {e["code"] for e in res.json()["report"]["errors"]}
        assert codes == {"MalformedDocument"}

    def test_fixture_upload(self, empty_client):
        raw = fixture_bytes("demo_small.json")
        res = empty_client.post("/api/corpus", content=raw)
        assert res.status_code == 200
        echoed = empty_client.get("/api/corpus")
        assert parse_corpus(echoed.content) == parse_corpus(raw)

    def test_warnings_surface_in_response(self, client, hand_doc):
        tweaked = mutate(hand_doc, lambda d: d["sessions"][0]["turns"][0]
                         ["blocks"][0].update({"contentLength": 999}))
        res = client.post("/api/corpus", content=json.dumps(tweaked))
        assert res.status_code == 200
        assert any(w["code"] == "ContentLengthRecomputed"
                   for w in res.json()["warnings"])
