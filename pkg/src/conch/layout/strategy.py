"""Strategy view geometry: the augmented stacked bar.

Rows share the vertical bands of the session circles (height = diameter);
columns are ordered ascending by peak usage with width proportional to it, so
one unit width is constant everywhere and a full row cell means the session
hit that strategy's peak. Affirmative units occupy the upper lane of a row,
negative units the lower one.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import analytics
from ..model import CorpusIndex, DebateCorpus, Side
from .config import LayoutConfig
from .process import SessionCircle


@dataclass(frozen=True)
class StrategyRow:
    session_id: str
    y0: float
    y1: float


@dataclass(frozen=True)
class StrategyColumn:
    strategy_id: str
    icon_key: str
    x0: float
    x1: float
    peak: int


@dataclass(frozen=True)
class UnitRect:
    block_id: str
    strategy_id: str
    side: Side
    x: float
    y: float
    width: float
    height: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + 0.5 * self.width, self.y + 0.5 * self.height)


@dataclass(frozen=True)
class CoLink:
    block_id: str
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class IconBox:
    id: str
    session_id: str
    side: Side
    strategy_ids: frozenset[str]
    multiplicity: int
    x: float
    y: float
    size: float
    icon_keys: tuple[str, ...]


@dataclass(frozen=True)
class DashedLink:
    block_id: str
    icon_box_id: str
    x0: float
    y0: float
    x1: float
    y1: float


@dataclass(frozen=True)
class StrategyLayout:
    rows: tuple[StrategyRow, ...]
    columns: tuple[StrategyColumn, ...]
    units: tuple[UnitRect, ...]
    co_links: tuple[CoLink, ...]
    dashed_links: tuple[DashedLink, ...]
    icon_boxes: tuple[IconBox, ...]
    x_origin: float
    x_extent: float


def layout_strategy(corpus: DebateCorpus, circles: list[SessionCircle],
                    config: LayoutConfig, index: CorpusIndex | None = None,
                    x_origin: float = 0.0) -> StrategyLayout:
    index = index or CorpusIndex(corpus)
    catalog = corpus.strategy_catalog
    entries = catalog.by_id()
    usage = analytics.strategy_usage(corpus, index)
    peaks = analytics.peak_usage(usage)

    rows = tuple(StrategyRow(c.session_id, -c.distance - c.radius,
                             -c.distance + c.radius) for c in circles)
    row_by_session = {r.session_id: r for r in rows}

    ordered = sorted(peaks, key=lambda s: (peaks[s], catalog.order(s)))
    columns = []
    x = x_origin
    for strategy_id in ordered:
        width = peaks[strategy_id] * config.unit_width
        icon = entries[strategy_id].icon_key if strategy_id in entries else ""
        columns.append(StrategyColumn(strategy_id, icon, x, x + width,
                                      peaks[strategy_id]))
        x += width + config.column_gap
    column_by_id = {c.strategy_id: c for c in columns}
    columns_end = x - config.column_gap if columns else x_origin

    def lane_y(session_id: str, side: Side) -> float:
        row = row_by_session[session_id]
        center = 0.5 * (row.y0 + row.y1)
        if side is Side.AFFIRMATIVE:
            return center - 0.5 * config.lane_gap - config.unit_height
        return center + 0.5 * config.lane_gap

    units: list[UnitRect] = []
    units_by_block: dict[str, list[UnitRect]] = {}
    fill: dict[tuple[str, str, Side], int] = {}
    for block in index.blocks_chronological():
        if block.session_id not in row_by_session:
            continue
        for tag in block.strategy_tags:
            column = column_by_id.get(tag.strategy_id)
            if column is None:
                continue
            key = (block.session_id, tag.strategy_id, block.side)
            slot = fill.get(key, 0)
            fill[key] = slot + 1
            unit = UnitRect(
                block_id=block.id, strategy_id=tag.strategy_id, side=block.side,
                x=column.x0 + slot * config.unit_width,
                y=lane_y(block.session_id, block.side),
                width=config.unit_width, height=config.unit_height)
            units.append(unit)
            units_by_block.setdefault(block.id, []).append(unit)

    records = analytics.cooccurrence(corpus)
    groups = analytics.cooccurrence_groups(records)

    box_area_x = columns_end + config.icon_area_gap
    icon_boxes: list[IconBox] = []
    box_by_key: dict[tuple[str, Side, frozenset[str]], IconBox] = {}
    per_lane_count: dict[tuple[str, Side], int] = {}
    for key in sorted(groups, key=lambda k: (row_order(k[0], rows), k[1].value,
                                             tuple(sorted(k[2])))):
        session_id, side, strategy_set = key
        lane_slot = per_lane_count.get((session_id, side), 0)
        per_lane_count[(session_id, side)] = lane_slot + 1
        size = config.icon_box_size
        box = IconBox(
            id=f"ibox-{session_id}-{side.value}-" + "+".join(sorted(strategy_set)),
            session_id=session_id, side=side, strategy_ids=strategy_set,
            multiplicity=len(groups[key]),
            x=box_area_x + lane_slot * (size + 6.0),
            y=lane_y(session_id, side) + 0.5 * config.unit_height - 0.5 * size,
            size=size,
            icon_keys=tuple(entries[s].icon_key
                            for s in sorted(strategy_set, key=catalog.order)
                            if s in entries))
        icon_boxes.append(box)
        box_by_key[key] = box

    co_links: list[CoLink] = []
    dashed_links: list[DashedLink] = []
    for record in sorted(records, key=lambda r: index.rank[r.block_id]):
        block_units = sorted(units_by_block.get(record.block_id, []),
                             key=lambda u: (u.x, u.y))
        if len(block_units) < 2:
            continue
        co_links.append(CoLink(record.block_id,
                               tuple(u.center for u in block_units)))
        box = box_by_key[(record.session_id, record.side, record.strategy_ids)]
        leftmost = block_units[0]
        dashed_links.append(DashedLink(
            block_id=record.block_id, icon_box_id=box.id,
            x0=leftmost.center[0], y0=leftmost.center[1],
            x1=box.x, y1=box.y + 0.5 * box.size))

    max_box_edge = max((b.x + b.size for b in icon_boxes), default=columns_end)
    return StrategyLayout(
        rows=rows, columns=tuple(columns), units=tuple(units),
        co_links=tuple(co_links), dashed_links=tuple(dashed_links),
        icon_boxes=tuple(icon_boxes), x_origin=x_origin,
        x_extent=max(max_box_edge, columns_end))


def row_order(session_id: str, rows: tuple[StrategyRow, ...]) -> int:
    for i, row in enumerate(rows):
        if row.session_id == session_id:
            return i
    return len(rows)
