import json

import pytest

from conch.errors import UnknownFilterTarget
from conch.layout.config import LayoutConfig
from conch.model import CorpusIndex
from conch.scene import (
    ALL_VIEWS, FilterState, block_card_record, build_scene, palette_color,
)
from conch.synth import make_corpus


def view_ids(graph):
    return [child.id for child in graph.root.children]


class TestViewSelection:
    def test_all_views_present(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config)
        assert view_ids(graph) == ["session-view", "process-view",
                                   "strategy-view", "content-view"]
        assert graph.meta["views"] == list(ALL_VIEWS)

    def test_subset_views(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config,
                            views=("session", "process"))
        assert view_ids(graph) == ["session-view", "process-view"]

    def test_strategy_only(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config, views=("strategy",))
        assert view_ids(graph) == ["strategy-view"]


class TestFilters:
    def test_unknown_targets_rejected(self, hand_corpus, config):
        for filt in (FilterState(session="zz"), FilterState(turn="zz"),
                     FilterState(block="zz"), FilterState(clash_point="zz")):
            with pytest.raises(UnknownFilterTarget):
                build_scene(hand_corpus, config, filt)

    def test_bad_color_mode_rejected(self, hand_corpus, config):
        with pytest.raises(ValueError):
            build_scene(hand_corpus, config,
                        FilterState(chord_color_mode="purple"))

    def test_block_filter_wins_over_turn_and_session(self, hand_corpus,
                                                     config):
        filt = FilterState(session="s1", turn="t1", block="b4")
        graph = build_scene(hand_corpus, config, filt)
        hl = graph.meta["highlights"]
        assert hl["blocks"] == ["b4"]
        assert hl["turns"] == []
        assert hl["sessions"] == []

    def test_turn_filter_lights_member_blocks(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config, FilterState(turn="t1"))
        hl = graph.meta["highlights"]
        assert hl["turns"] == ["t1"]
        assert hl["blocks"] == ["b1", "b2"]

    def test_session_filter(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config, FilterState(session="s2"))
        hl = graph.meta["highlights"]
        assert hl["sessions"] == ["s2"]
        assert hl["blocks"] == []

    def test_scroll_target_follows_block(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config, FilterState(block="b3"))
        assert graph.meta["scrollTarget"] == "b3"
        assert build_scene(hand_corpus, config).meta["scrollTarget"] is None

    def test_highlight_style_suffix(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config, FilterState(block="b4"))
        node = graph.find("subarc-b4")
        assert node is not None and node.style.endswith(" highlighted")
        other = graph.find("subarc-b1")
        assert "highlighted" not in other.style


class TestClashFilter:
    def test_chords_reduced_and_mode_forced(self, hand_corpus, config):
        full = build_scene(hand_corpus, config)
        assert full.meta["counts"]["chords"] == 4

        filtered = build_scene(hand_corpus, config,
                               FilterState(clash_point="cp2"))
        assert filtered.meta["counts"]["chords"] == 1
        assert filtered.meta["filter"]["chordColorMode"] == "clash"
        chord = filtered.nodes_of_kind("chord")[0]
        assert chord.data["clashPointId"] == "cp2"
        assert chord.data["colorMode"] == "clashColor"
        assert chord.data["colors"] == "blue"

    def test_referencing_blocks_highlighted(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config,
                            FilterState(clash_point="cp2"))
        hl = graph.meta["highlights"]
        assert hl["clashPoints"] == ["cp2"]
        assert hl["blocks"] == ["b3", "b5"]

    def test_connector_lines_only_under_clash_filter(self, hand_corpus,
                                                     config):
        plain = build_scene(hand_corpus, config)
        assert plain.find("connectors") is None
        graph = build_scene(hand_corpus, config,
                            FilterState(clash_point="cp1"))
        connectors = graph.find("connectors")
        assert connectors is not None
        ids = {c.id for c in connectors.children}
        # every block referencing cp1 gets a connector to its sub-arc
        assert ids == {f"connector-{b}" for b in
                       ("b1", "b2", "b3", "b4", "b5")}

    def test_side_mode_chords_unchanged_by_default(self, hand_corpus,
                                                   config):
        graph = build_scene(hand_corpus, config)
        modes = {c.data["colorMode"] for c in graph.nodes_of_kind("chord")}
        assert modes <= {"monoBySide", "bicolorBySide"}


class TestGraphShape:
    def test_node_ids_unique(self, config):
        corpus = make_corpus(31)
        graph = build_scene(corpus, config)
        ids = [n.id for n in graph.nodes()]
        assert len(ids) == len(set(ids))

    def test_data_values_are_strings(self, config):
        corpus = make_corpus(32)
        graph = build_scene(corpus, config)
        for node in graph.nodes():
            for key, value in (node.data or {}).items():
                assert isinstance(key, str) and isinstance(value, str), \
                    (node.id, key, value)

    def test_counts_match_tree(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config)
        assert graph.meta["counts"]["chords"] == \
            len(graph.nodes_of_kind("chord"))
        assert graph.meta["counts"]["sessions"] == 2
        assert graph.meta["counts"]["blocks"] == 5

    def test_legend_lists_palette_and_interactions(self, hand_corpus,
                                                   config):
        meta = build_scene(hand_corpus, config).meta
        legend = {c["id"]: c for c in meta["legend"]["clashPoints"]}
        assert legend["cp1"]["interactions"] == 3
        assert legend["cp2"]["interactions"] == 1
        assert meta["palette"] == {"red": palette_color("red"),
                                   "blue": palette_color("blue")}
        strategies = [s["id"] for s in meta["legend"]["strategies"]]
        assert strategies == ["agreement", "reasoning", "evidence",
                              "ignoring", "questioning", "reframing"]

    def test_to_json_deterministic_and_sorted(self, hand_corpus, config):
        a = build_scene(hand_corpus, config).to_json()
        b = build_scene(hand_corpus, config).to_json()
        assert a == b
        assert json.loads(a) == json.loads(b)
        payload = json.loads(a)
        assert list(payload) == sorted(payload)

    def test_build_is_pure_across_equal_filters(self, hand_corpus, config):
        f1 = FilterState(clash_point="cp1")
        f2 = FilterState(clash_point="cp1")
        a = build_scene(hand_corpus, config, f1).to_json()
        b = build_scene(hand_corpus, config, f2).to_json()
        assert a == b


class TestBlockCard:
    def test_runs_reassemble_text(self, hand_corpus, hand_index):
        for block in hand_corpus.blocks:
            card = block_card_record(block.id, hand_index)
            assert "".join(r["text"] for r in card["runs"]) == block.text

    def test_card_fields(self, hand_index):
        card = block_card_record("b2", hand_index)
        assert card["identifier"] == "DEBATER A1"
        assert card["side"] == "affirmative"
        assert card["contentLength"] == 30
        assert [r["strategyIds"] for r in card["runs"]] == \
            [["evidence"], ["questioning"]]
        assert [r["iconKeys"] for r in card["runs"]] == \
            [["document"], ["question"]]
        assert [c["id"] for c in card["clashPoints"]] == ["cp1"]
        assert [d["id"] for d in card["disagreements"]] == ["cp1-d2"]

    def test_strategy_ids_follow_catalog_order(self, hand_index):
        # b2 run (0,1) has one tag; synthesize ordering check on card of b5
        card = block_card_record("b5", hand_index)
        for run in card["runs"]:
            assert run["strategyIds"] == sorted(
                run["strategyIds"],
                key=["agreement", "reasoning", "evidence", "ignoring",
                     "questioning", "reframing"].index)


class TestContentView:
    def test_cards_in_chronological_order(self, hand_corpus, config):
        graph = build_scene(hand_corpus, config, views=("content",))
        cards = [n for n in graph.nodes() if n.kind == "group"
                 and n.id.startswith("card-")]
        assert [c.id for c in cards] == [f"card-b{i}" for i in range(1, 6)]

    def test_content_view_standalone_matches_full(self, hand_corpus,
                                                  config):
        alone = build_scene(hand_corpus, config, views=("content",))
        assert alone.find("content-view") is not None
