import layout_checks
from conch import synth
from conch.layout.config import LayoutConfig
from conch.layout.process import layout_session_circles
from conch.layout.strategy import layout_strategy
from conch.model import CorpusIndex, Side


def build(corpus, config):
    index = CorpusIndex(corpus)
    lengths = [(s.id, sum(index.blocks[b].content_length
                          for b in index.session_blocks[s.id]))
               for s in corpus.sessions]
    circles = layout_session_circles(lengths, config)
    return layout_strategy(corpus, circles, config, index), index, circles


class TestRowsAndColumns:
    def test_rows_mirror_circles(self, hand_corpus, config):
        strategy, _index, circles = build(hand_corpus, config)
        for row, circle in zip(strategy.rows, circles):
            assert row.session_id == circle.session_id
            assert row.y0 == -circle.distance - circle.radius
            assert row.y1 == -circle.distance + circle.radius

    def test_columns_ascend_by_peak(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        peaks = [c.peak for c in strategy.columns]
        assert peaks == sorted(peaks)

    def test_only_used_strategies_get_columns(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        ids = {c.strategy_id for c in strategy.columns}
        assert ids == {"reasoning", "evidence", "questioning", "ignoring",
                       "agreement"}

    def test_column_width_follows_peak(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        for column in strategy.columns:
            assert (column.x1 - column.x0) == \
                column.peak * config.unit_width


class TestUnits:
    def test_one_unit_per_tag_instance(self, hand_corpus, config):
        # b1:1  b2:2  b3:0  b4:1  b5:1
        strategy, _index, _circles = build(hand_corpus, config)
        assert len(strategy.units) == 5

    def test_lane_side_separation(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        rows = {r.session_id: r for r in strategy.rows}
        sessions = {c.session_id: c for c in strategy.rows}
        by_block_session = {}
        for unit in strategy.units:
            center_y = 0.5 * (rows[_session_of(unit, _index)].y0
                              + rows[_session_of(unit, _index)].y1)
            if unit.side is Side.AFFIRMATIVE:
                assert unit.y + unit.height <= center_y
            else:
                assert unit.y >= center_y

    def test_units_sit_inside_their_column(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        columns = {c.strategy_id: c for c in strategy.columns}
        for unit in strategy.units:
            column = columns[unit.strategy_id]
            assert column.x0 - 1e-9 <= unit.x
            assert unit.x + unit.width <= column.x1 + 1e-9

    def test_chronological_packing(self, config):
        corpus = synth.make_corpus(8)
        strategy, index, _circles = build(corpus, config)
        lanes = {}
        for unit in strategy.units:
            session = index.session_of_turn[index.turn_of_block[unit.block_id]]
            key = (session, unit.strategy_id, unit.side)
            lanes.setdefault(key, []).append(unit)
        for units in lanes.values():
            ranks = [index.rank[u.block_id] for u in units]
            xs = [u.x for u in units]
            paired = sorted(zip(ranks, xs))
            assert [x for _, x in paired] == sorted(xs)


class TestCoLinks:
    def test_polyline_for_multi_strategy_blocks(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        linked = {link.block_id for link in strategy.co_links}
        assert linked == {"b2"}

    def test_polyline_visits_all_units_sorted(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        link = next(l for l in strategy.co_links if l.block_id == "b2")
        units = [u for u in strategy.units if u.block_id == "b2"]
        assert len(link.points) == len(units) == 2
        assert list(link.points) == sorted(link.points)


class TestIconBoxes:
    def test_boxes_merge_by_session_side_and_set(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        keys = [(b.session_id, b.side, b.strategy_ids)
                for b in strategy.icon_boxes]
        assert len(keys) == len(set(keys))

    def test_dashed_links_match_multiplicity(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        for box in strategy.icon_boxes:
            links = [l for l in strategy.dashed_links
                     if l.icon_box_id == box.id]
            assert len(links) == box.multiplicity

    def test_links_come_from_multi_strategy_blocks(self, hand_corpus,
                                                   config):
        strategy, _index, _circles = build(hand_corpus, config)
        multi = {b.id for b in hand_corpus.blocks
                 if len({t.strategy_id for t in b.strategy_tags}) >= 2}
        assert {l.block_id for l in strategy.dashed_links} == multi

    def test_dashed_link_starts_at_leftmost_unit(self, hand_corpus, config):
        strategy, _index, _circles = build(hand_corpus, config)
        for link in strategy.dashed_links:
            units = [u for u in strategy.units
                     if u.block_id == link.block_id]
            leftmost = min(u.center[0] for u in units)
            assert link.x0 == leftmost


class TestInvariantsAcrossSeeds:
    def test_structural_checks(self, config):
        for seed in range(8):
            corpus = synth.make_corpus(seed)
            strategy, index, _circles = build(corpus, config)
            layout_checks.check_strategy_layout(strategy, corpus, index)

    def test_x_extent_covers_everything(self, config):
        corpus = synth.make_corpus(4)
        strategy, _index, _circles = build(corpus, config)
        far = max([u.x + u.width for u in strategy.units]
                  + [b.x + b.size for b in strategy.icon_boxes]
                  + [c.x1 for c in strategy.columns])
        assert strategy.x_extent >= far - 1e-9


def _session_of(unit, index):
    return index.session_of_turn[index.turn_of_block[unit.block_id]]
