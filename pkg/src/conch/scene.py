"""Scene graph assembly: layouts plus content become one drawing tree.

The scene is renderer-agnostic; every drawable is a node with numeric
geometry, a style class string, and an optional interaction handle naming the
corpus entity it stands for. Building is pure per (corpus, config, filter);
node order is deterministic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from . import analytics, textutil
from .errors import UnknownFilterTarget
from .layout.config import LayoutConfig
from .layout.process import (
    ProcessLayout, block_chord_angles, build_process_layout, layout_chords,
)
from .layout.strategy import StrategyLayout, layout_strategy
from .layout.text import LINE_HEIGHT, wrap_lines
from .model import CorpusIndex, DebateCorpus, display_identifier

#: css color per palette slot; palette-N overflow keys all map to gray
CSS_COLORS = {
    "red": "#d62728", "orange": "#ff7f0e", "yellow": "#e7ba52",
    "green": "#2ca02c", "blue": "#1f77b4", "purple": "#9467bd",
    "teal": "#17becf", "pink": "#e377c2", "olive": "#bcbd22",
    "cyan": "#9edae5", "brown": "#8c564b", "magenta": "#c49c94",
}
FALLBACK_COLOR = "#888888"

ALL_VIEWS = ("session", "process", "strategy", "content")


def palette_color(color_key: str) -> str:
    return CSS_COLORS.get(color_key, FALLBACK_COLOR)


@dataclass(frozen=True)
class FilterState:
    session: str | None = None
    turn: str | None = None
    block: str | None = None
    clash_point: str | None = None
    chord_color_mode: str = "side"

    def validate(self) -> None:
        if self.chord_color_mode not in ("side", "clash"):
            raise ValueError(
                f"chordColorMode must be 'side' or 'clash', got {self.chord_color_mode!r}")

    def to_dict(self) -> dict:
        return {"session": self.session, "turn": self.turn, "block": self.block,
                "clashPoint": self.clash_point,
                "chordColorMode": self.chord_color_mode}


@dataclass(frozen=True)
class SceneNode:
    kind: str
    id: str
    geometry: dict = field(default_factory=dict)
    style: str = ""
    handle: tuple[str, str] | None = None
    text: str | None = None
    data: dict | None = None
    children: tuple["SceneNode", ...] = ()

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "id": self.id}
        if self.geometry:
            out["geometry"] = self.geometry
        if self.style:
            out["style"] = self.style
        if self.handle:
            out["handle"] = {"targetKind": self.handle[0], "targetId": self.handle[1]}
        if self.text is not None:
            out["text"] = self.text
        if self.data:
            out["data"] = self.data
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class SceneGraph:
    meta: dict
    root: SceneNode

    def to_dict(self) -> dict:
        return {"meta": self.meta, "root": self.root.to_dict()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def nodes(self):
        return self.root.walk()

    def nodes_of_kind(self, kind: str):
        return [n for n in self.nodes() if n.kind == kind]

    def find(self, node_id: str) -> SceneNode | None:
        for node in self.nodes():
            if node.id == node_id:
                return node
        return None


def _point(config: LayoutConfig, r: float, theta: float) -> tuple[float, float]:
    cx, cy = config.pole_origin
    return (cx + r * math.sin(theta), cy - r * math.cos(theta))


def _resolve_filter(filt: FilterState, index: CorpusIndex) -> None:
    filt.validate()
    checks = (("session", filt.session, index.sessions),
              ("turn", filt.turn, index.turns),
              ("block", filt.block, index.blocks),
              ("clashPoint", filt.clash_point, index.clash_points))
    for kind, value, table in checks:
        if value is not None and value not in table:
            raise UnknownFilterTarget(f"unknown {kind} id {value!r}")


def _highlights(filt: FilterState, index: CorpusIndex) -> dict:
    """Server-declared highlight sets; most specific structural filter wins."""
    sessions: set[str] = set()
    turns: set[str] = set()
    blocks: set[str] = set()
    clash_points: set[str] = set()
    if filt.block:
        blocks.add(filt.block)
    elif filt.turn:
        turns.add(filt.turn)
        blocks.update(index.turns[filt.turn].block_ids)
    elif filt.session:
        sessions.add(filt.session)
    if filt.clash_point:
        clash_points.add(filt.clash_point)
        for block in index.corpus.blocks:
            if filt.clash_point in block.clash_point_ids:
                blocks.add(block.id)
    return {"sessions": sorted(sessions), "turns": sorted(turns),
            "blocks": sorted(blocks), "clashPoints": sorted(clash_points)}


def _style(base: str, highlighted: bool) -> str:
    return base + " highlighted" if highlighted else base


# ---------------------------------------------------------------------------
# view subtree builders


def _session_view(corpus, index, layout: ProcessLayout, config, hl) -> SceneNode:
    children = []
    cx, cy = config.pole_origin
    for circle in layout.circles:
        center_x, center_y = cx, cy - circle.distance
        lit = circle.session_id in hl["sessions"]
        parts = []
        if circle.aff_share > 1e-12:
            parts.append(SceneNode(
                kind="arcBand", id=f"circle-{circle.session_id}-aff",
                geometry={"cx": center_x, "cy": center_y, "r0": 0.0,
                          "r1": circle.radius, "a0": 0.0,
                          "a1": circle.aff_share * 2.0 * math.pi},
                style="side-affirmative"))
        if circle.neg_share > 1e-12:
            parts.append(SceneNode(
                kind="arcBand", id=f"circle-{circle.session_id}-neg",
                geometry={"cx": center_x, "cy": center_y, "r0": 0.0,
                          "r1": circle.radius,
                          "a0": circle.aff_share * 2.0 * math.pi,
                          "a1": 2.0 * math.pi},
                style="side-negative"))
        session = index.sessions[circle.session_id]
        parts.append(SceneNode(
            kind="circle", id=f"circle-{circle.session_id}",
            geometry={"cx": center_x, "cy": center_y, "r": circle.radius},
            style=_style("circle-outline", lit),
            handle=("session", circle.session_id)))
        parts.append(SceneNode(
            kind="text", id=f"circle-label-{circle.session_id}",
            geometry={"x": center_x - circle.radius - 6.0, "y": center_y,
                      "fontSize": 8.0, "anchor": 2.0},
            style="session-index", text=str(session.index)))
        children.append(SceneNode(kind="group", id=f"session-{circle.session_id}",
                                  handle=("session", circle.session_id),
                                  children=tuple(parts)))
    return SceneNode(kind="group", id="session-view", children=tuple(children))


def _chord_nodes(chords, config, hl, clash_filtered: bool) -> list[SceneNode]:
    nodes = []
    cx, cy = config.pole_origin
    r = config.chord_circle_radius
    for i, chord in enumerate(chords):
        x1, y1 = _point(config, r, chord.from_angle)
        x2, y2 = _point(config, r, chord.to_angle)
        mx, my = 0.5 * (x1 + x2), 0.5 * (y1 + y2)
        ctrl_x = cx + (mx - cx) * 0.35
        ctrl_y = cy + (my - cy) * 0.35
        nodes.append(SceneNode(
            kind="chord",
            id=f"chord-{i}-{chord.disagreement_id}-{chord.from_block_id}-{chord.to_block_id}",
            geometry={"x1": x1, "y1": y1, "cx": ctrl_x, "cy": ctrl_y,
                      "x2": x2, "y2": y2},
            style=_style("chord", clash_filtered),
            handle=("disagreement", chord.disagreement_id),
            data={"colorMode": chord.color_mode,
                  "colors": "|".join(chord.colors),
                  "clashPointId": chord.clash_point_id,
                  "fromBlockId": chord.from_block_id,
                  "toBlockId": chord.to_block_id}))
    return nodes


def _sector_nodes(layout: ProcessLayout, corpus, index, config, hl) -> list[SceneNode]:
    clash_of = {d.id: d.clash_point_id for d in corpus.disagreements}
    color_of = {c.id: c.color_key for c in corpus.clash_points}
    cx, cy = config.pole_origin
    out = []
    for sector in layout.sector_blocks:
        theta_mid = 0.5 * (sector.theta0 + sector.theta1)
        thickness = sector.outer_radius - sector.inner_radius
        color_key = color_of.get(clash_of.get(sector.disagreement_id, ""), "")
        parts = [SceneNode(
            kind="arcBand",
            id=f"sector-band-{sector.session_id}-{sector.disagreement_id}",
            geometry={"cx": cx, "cy": cy, "r0": sector.inner_radius,
                      "r1": sector.outer_radius, "a0": sector.theta0,
                      "a1": sector.theta1},
            style=f"sector-block clash-{color_key}-dim" if color_key else "sector-block",
            handle=("disagreement", sector.disagreement_id),
            data={"blockCount": str(sector.block_count)})]
        label_r = sector.inner_radius + 0.62 * thickness
        lx, ly = _point(config, label_r, theta_mid)
        n_lines = len(sector.label.lines)
        for li, line in enumerate(sector.label.lines):
            dy = (li - 0.5 * (n_lines - 1)) * LINE_HEIGHT * sector.label.font_size
            node_data = None
            if sector.label.truncated and li == 0:
                dis = index.disagreements[sector.disagreement_id]
                node_data = {"tooltip": dis.label}
            parts.append(SceneNode(
                kind="text",
                id=f"sector-label-{sector.session_id}-{sector.disagreement_id}-{li}",
                geometry={"x": lx, "y": ly + dy,
                          "fontSize": sector.label.font_size, "anchor": 1.0},
                style="sector-label", text=line, data=node_data))
        vp_r = sector.inner_radius + 0.3 * thickness
        vx, vy = _point(config, vp_r, theta_mid)
        for li, line in enumerate(sector.viewpoints.lines):
            dy = li * LINE_HEIGHT * sector.viewpoints.font_size
            parts.append(SceneNode(
                kind="text",
                id=f"sector-viewpoints-{sector.session_id}-{sector.disagreement_id}-{li}",
                geometry={"x": vx, "y": vy + dy,
                          "fontSize": sector.viewpoints.font_size, "anchor": 1.0},
                style="sector-viewpoints", text=line))
        icon_r = sector.inner_radius + 0.1 * thickness
        n_icons = len(sector.icon_keys)
        for ii, icon_key in enumerate(sector.icon_keys):
            theta = sector.theta0 + (ii + 0.5) * (sector.theta1 - sector.theta0) / n_icons
            ix, iy = _point(config, icon_r, theta)
            parts.append(SceneNode(
                kind="icon",
                id=f"sector-icon-{sector.session_id}-{sector.disagreement_id}-{ii}",
                geometry={"x": ix, "y": iy, "size": 7.0}, style="sector-icon",
                text=icon_key))
        out.append(SceneNode(
            kind="group", id=f"sector-{sector.session_id}-{sector.disagreement_id}",
            children=tuple(parts)))
    return out


def _process_view(corpus, index, layout: ProcessLayout, config, filt, hl,
                  chords, clash_filtered) -> SceneNode:
    cx, cy = config.pole_origin
    groups = []

    spiral_children = []
    for segment in layout.segments:
        lit_session = segment.session_id in hl["sessions"]
        subs = []
        for sub in segment.sub_arcs:
            lit = lit_session or sub.block_id in hl["blocks"]
            subs.append(SceneNode(
                kind="spiralStroke", id=f"subarc-{sub.block_id}",
                geometry={"cx": cx, "cy": cy, "a": segment.start_radius,
                          "b": segment.pitch, "t0": sub.theta0, "t1": sub.theta1},
                style=_style(f"stroke-{sub.side.value}", lit),
                handle=("block", sub.block_id)))
        spiral_children.append(SceneNode(
            kind="group", id=f"segment-{segment.session_id}",
            style=_style("spiral-segment", lit_session),
            handle=("session", segment.session_id),
            data={"clamped": "1"} if segment.clamped else None,
            children=tuple(subs)))
    groups.append(SceneNode(kind="group", id="spirals",
                            children=tuple(spiral_children)))

    groups.append(SceneNode(
        kind="circle", id="chord-backdrop",
        geometry={"cx": cx, "cy": cy, "r": config.chord_circle_radius - 1.5},
        style="chord-backdrop"))

    arc_nodes = [SceneNode(
        kind="arcBand", id=f"session-arc-{arc.session_id}",
        geometry={"cx": cx, "cy": cy, "r0": config.chord_circle_radius - 1.5,
                  "r1": config.chord_circle_radius, "a0": arc.start_angle,
                  "a1": arc.start_angle + arc.sweep},
        style=_style("session-arc", arc.session_id in hl["sessions"]),
        handle=("session", arc.session_id)) for arc in layout.session_arcs]
    groups.append(SceneNode(kind="group", id="chord-circle", children=tuple(arc_nodes)))

    groups.append(SceneNode(kind="group", id="chords",
                            children=tuple(_chord_nodes(chords, config, hl,
                                                        clash_filtered))))

    ring_nodes = []
    color_of = {c.id: c.color_key for c in corpus.clash_points}
    for section in layout.ring_sections:
        lit = section.clash_point_id in hl["clashPoints"]
        ring_nodes.append(SceneNode(
            kind="arcBand",
            id=f"ring-{section.session_id}-{section.clash_point_id}",
            geometry={"cx": cx, "cy": cy, "r0": section.inner_radius,
                      "r1": section.outer_radius, "a0": section.theta0,
                      "a1": section.theta1},
            style=_style(f"ring-section clash-{color_of.get(section.clash_point_id, '')}",
                         lit),
            handle=("clashPoint", section.clash_point_id),
            data={"share": f"{section.share:.6f}"}))
    groups.append(SceneNode(kind="group", id="ring", children=tuple(ring_nodes)))

    groups.append(SceneNode(kind="group", id="sectors",
                            children=tuple(_sector_nodes(layout, corpus, index,
                                                         config, hl))))

    if clash_filtered:
        connector_nodes = []
        seen: set[str] = set()
        sub_by_block = {}
        seg_by_session = {s.session_id: s for s in layout.segments}
        for segment in layout.segments:
            for sub in segment.sub_arcs:
                sub_by_block[sub.block_id] = (segment, sub)
        angles = _chord_endpoint_angles(chords)
        for block_id in sorted(angles):
            if block_id in seen or block_id not in sub_by_block:
                continue
            seen.add(block_id)
            segment, sub = sub_by_block[block_id]
            theta_mid = 0.5 * (sub.theta0 + sub.theta1)
            r_mid = segment.start_radius + segment.pitch * theta_mid
            x0, y0 = _point(config, config.chord_circle_radius, angles[block_id])
            x1, y1 = _point(config, r_mid, theta_mid)
            connector_nodes.append(SceneNode(
                kind="dashedLine", id=f"connector-{block_id}",
                geometry={"x1": x0, "y1": y0, "x2": x1, "y2": y1},
                style="connector", handle=("block", block_id)))
        groups.append(SceneNode(kind="group", id="connectors",
                                children=tuple(connector_nodes)))

    legend_rows = []
    interactions = analytics.interactions_from_paths(corpus, index)
    per_clash: dict[str, int] = {}
    for inter in interactions:
        per_clash[inter.clash_point_id] = per_clash.get(inter.clash_point_id, 0) + 1
    max_r = layout.max_radius()
    legend_x = cx - max_r - 240.0
    legend_y = cy - max_r
    for li, clash in enumerate(corpus.clash_points):
        y = legend_y + li * 18.0
        lit = clash.id in hl["clashPoints"]
        legend_rows.append(SceneNode(
            kind="group", id=f"legend-clash-{clash.id}",
            handle=("clashPoint", clash.id),
            children=(
                SceneNode(kind="rect", id=f"legend-swatch-{clash.id}",
                          geometry={"x": legend_x, "y": y, "width": 12.0,
                                    "height": 12.0},
                          style=_style(f"clash-{clash.color_key}", lit)),
                SceneNode(kind="text", id=f"legend-label-{clash.id}",
                          geometry={"x": legend_x + 18.0, "y": y + 10.0,
                                    "fontSize": 10.0, "anchor": 0.0},
                          style=_style("legend-text", lit),
                          text=f"{clash.label} ({per_clash.get(clash.id, 0)})"),
            )))
    groups.append(SceneNode(kind="group", id="clash-legend",
                            data={"expandable": "1"}, children=tuple(legend_rows)))

    return SceneNode(kind="group", id="process-view", children=tuple(groups))


def _chord_endpoint_angles(chords) -> dict[str, float]:
    angles: dict[str, float] = {}
    for chord in chords:
        angles.setdefault(chord.from_block_id, chord.from_angle)
        angles.setdefault(chord.to_block_id, chord.to_angle)
    return angles


def _strategy_view(corpus, index, strategy: StrategyLayout, config, hl) -> SceneNode:
    groups = []
    entries = corpus.strategy_catalog.by_id()

    row_nodes = [SceneNode(
        kind="rect", id=f"strategy-row-{row.session_id}",
        geometry={"x": strategy.x_origin - 4.0, "y": row.y0,
                  "width": strategy.x_extent - strategy.x_origin + 8.0,
                  "height": row.y1 - row.y0},
        style=_style("strategy-row", row.session_id in hl["sessions"]),
        handle=("session", row.session_id)) for row in strategy.rows]
    groups.append(SceneNode(kind="group", id="strategy-rows", children=tuple(row_nodes)))

    y_top = min((r.y0 for r in strategy.rows), default=0.0)
    y_bottom = max((r.y1 for r in strategy.rows), default=0.0)
    column_nodes = []
    for column in strategy.columns:
        column_nodes.append(SceneNode(
            kind="group", id=f"strategy-column-{column.strategy_id}",
            handle=("strategy", column.strategy_id),
            children=(
                SceneNode(kind="rect", id=f"column-band-{column.strategy_id}",
                          geometry={"x": column.x0, "y": y_top - 24.0,
                                    "width": column.x1 - column.x0,
                                    "height": y_bottom - y_top + 24.0},
                          style="strategy-column"),
                SceneNode(kind="icon", id=f"column-icon-{column.strategy_id}",
                          geometry={"x": 0.5 * (column.x0 + column.x1),
                                    "y": y_top - 14.0, "size": 10.0},
                          style="column-icon", text=column.icon_key,
                          data={"peak": str(column.peak)}),
            )))
    groups.append(SceneNode(kind="group", id="strategy-columns",
                            children=tuple(column_nodes)))

    unit_nodes = []
    unit_counter: dict[str, int] = {}
    for unit in strategy.units:
        n = unit_counter.get(unit.block_id, 0)
        unit_counter[unit.block_id] = n + 1
        unit_nodes.append(SceneNode(
            kind="rect", id=f"unit-{unit.block_id}-{n}",
            geometry={"x": unit.x, "y": unit.y, "width": unit.width,
                      "height": unit.height},
            style=_style(f"unit side-{unit.side.value}",
                         unit.block_id in hl["blocks"]),
            handle=("block", unit.block_id),
            data={"strategyId": unit.strategy_id}))
    groups.append(SceneNode(kind="group", id="strategy-units", children=tuple(unit_nodes)))

    link_nodes = [SceneNode(
        kind="polyline", id=f"colink-{link.block_id}",
        geometry={f"p{i}{axis}": v for i, (x, y) in enumerate(link.points)
                  for axis, v in (("x", x), ("y", y))},
        style=_style("co-link", link.block_id in hl["blocks"]),
        handle=("block", link.block_id),
        data={"pointCount": str(len(link.points))}) for link in strategy.co_links]
    groups.append(SceneNode(kind="group", id="co-links", children=tuple(link_nodes)))

    dash_nodes = [SceneNode(
        kind="dashedLine", id=f"dashedlink-{link.block_id}",
        geometry={"x1": link.x0, "y1": link.y0, "x2": link.x1, "y2": link.y1},
        style="dashed-link", handle=("block", link.block_id),
        data={"iconBoxId": link.icon_box_id}) for link in strategy.dashed_links]
    groups.append(SceneNode(kind="group", id="dashed-links", children=tuple(dash_nodes)))

    box_nodes = []
    for box in strategy.icon_boxes:
        parts = [SceneNode(
            kind="rect", id=f"{box.id}-frame",
            geometry={"x": box.x, "y": box.y, "width": box.size, "height": box.size},
            style=f"icon-box side-{box.side.value}")]
        n_icons = max(1, len(box.icon_keys))
        for ii, icon_key in enumerate(box.icon_keys):
            parts.append(SceneNode(
                kind="icon", id=f"{box.id}-icon-{ii}",
                geometry={"x": box.x + (ii + 0.5) * box.size / n_icons,
                          "y": box.y + 0.5 * box.size,
                          "size": box.size / n_icons},
                style="box-icon", text=icon_key))
        parts.append(SceneNode(
            kind="text", id=f"{box.id}-multiplicity",
            geometry={"x": box.x + box.size + 3.0, "y": box.y + box.size - 3.0,
                      "fontSize": 8.0, "anchor": 0.0},
            style="multiplicity", text=f"×{box.multiplicity}"))
        box_nodes.append(SceneNode(kind="group", id=box.id,
                                   data={"multiplicity": str(box.multiplicity)},
                                   children=tuple(parts)))
    groups.append(SceneNode(kind="group", id="icon-boxes", children=tuple(box_nodes)))

    legend_rows = []
    legend_y = y_bottom + 30.0
    for li, entry in enumerate(corpus.strategy_catalog.entries):
        y = legend_y + li * 16.0
        legend_rows.append(SceneNode(
            kind="group", id=f"legend-strategy-{entry.id}",
            handle=("strategy", entry.id),
            children=(
                SceneNode(kind="icon", id=f"legend-icon-{entry.id}",
                          geometry={"x": strategy.x_origin + 6.0, "y": y,
                                    "size": 10.0},
                          style="legend-icon", text=entry.icon_key,
                          data={"tooltip": entry.description}),
                SceneNode(kind="text", id=f"legend-name-{entry.id}",
                          geometry={"x": strategy.x_origin + 18.0, "y": y + 4.0,
                                    "fontSize": 9.0, "anchor": 0.0},
                          style="legend-text", text=entry.name,
                          data={"tooltip": entry.description}),
            )))
    groups.append(SceneNode(kind="group", id="strategy-legend",
                            data={"expandable": "1"}, children=tuple(legend_rows)))

    return SceneNode(kind="group", id="strategy-view", children=tuple(groups))


def block_card_record(block_id: str, index: CorpusIndex) -> dict:
    """Content-card payload for one block, text pre-segmented by strategy."""
    block = index.blocks[block_id]
    corpus = index.corpus
    debater = index.debaters[block.debater_id]
    entries = corpus.strategy_catalog.by_id()
    spans = textutil.sentence_spans(block.text)
    runs = []
    for s_start, s_end in block.sentence_spans:
        if not spans:
            break
        char_start = spans[min(s_start, len(spans) - 1)][0]
        char_end = spans[min(s_end, len(spans) - 1)][1]
        strategy_ids = sorted(
            {tag.strategy_id for tag in block.strategy_tags
             if tag.sentence_range[0] <= s_end and tag.sentence_range[1] >= s_start},
            key=corpus.strategy_catalog.order)
        runs.append({
            "text": block.text[char_start:char_end],
            "sentences": [s_start, s_end],
            "strategyIds": strategy_ids,
            "iconKeys": [entries[s].icon_key for s in strategy_ids if s in entries],
        })
    clash_digest = [{"id": c.id, "label": c.label, "colorKey": c.color_key}
                    for c in corpus.clash_points
                    if c.id in block.clash_point_ids]
    dis_digest = [{"id": d.id, "label": d.label,
                   "affirmativeViewpoint": d.affirmative_viewpoint,
                   "negativeViewpoint": d.negative_viewpoint}
                  for d in corpus.disagreements
                  if d.id in block.disagreement_ids]
    return {
        "blockId": block.id,
        "sessionId": block.session_id,
        "turnId": block.turn_id,
        "debaterId": block.debater_id,
        "identifier": display_identifier(debater),
        "side": block.side.value,
        "contentLength": block.content_length,
        "clashPoints": clash_digest,
        "disagreements": dis_digest,
        "runs": runs,
    }


def _content_view(corpus, index, config, filt, hl, x0: float, y0: float) -> SceneNode:
    cards = []
    block_ids = [b.id for b in index.blocks_chronological()]
    if filt.session and not filt.block and not filt.turn:
        block_ids = [b for b in block_ids
                     if index.blocks[b].session_id == filt.session]
    text_width_budget = config.card_width - 16.0
    y = y0
    for block_id in block_ids:
        record = block_card_record(block_id, index)
        parts = []
        inner_y = y + 14.0
        parts.append(SceneNode(
            kind="text", id=f"card-identifier-{block_id}",
            geometry={"x": x0 + 8.0, "y": inner_y, "fontSize": 10.0, "anchor": 0.0},
            style=f"card-identifier side-{record['side']}-text",
            text=record["identifier"]))
        inner_y += 14.0
        for clash in record["clashPoints"]:
            parts.append(SceneNode(
                kind="text", id=f"card-clash-{block_id}-{clash['id']}",
                geometry={"x": x0 + 8.0, "y": inner_y, "fontSize": 8.0,
                          "anchor": 0.0},
                style=f"card-digest clash-{clash['colorKey']}-text",
                text=f"● {clash['label']}"))
            inner_y += 11.0
        for dis in record["disagreements"]:
            parts.append(SceneNode(
                kind="text", id=f"card-dis-{block_id}-{dis['id']}",
                geometry={"x": x0 + 8.0, "y": inner_y, "fontSize": 8.0,
                          "anchor": 0.0},
                style="card-digest",
                text=(f"{dis['label']}: {dis['affirmativeViewpoint']} / "
                      f"{dis['negativeViewpoint']}")))
            inner_y += 11.0
        for ri, run in enumerate(record["runs"]):
            lines = wrap_lines(run["text"], text_width_budget, config.card_font)
            if lines is None:
                lines = [run["text"]]
            for li, line in enumerate(lines):
                parts.append(SceneNode(
                    kind="text", id=f"card-run-{block_id}-{ri}-{li}",
                    geometry={"x": x0 + 8.0, "y": inner_y,
                              "fontSize": config.card_font, "anchor": 0.0},
                    style="card-text", text=line))
                inner_y += LINE_HEIGHT * config.card_font
            for ii, icon_key in enumerate(run["iconKeys"]):
                parts.append(SceneNode(
                    kind="icon", id=f"card-run-icon-{block_id}-{ri}-{ii}",
                    geometry={"x": x0 + 12.0 + ii * 14.0, "y": inner_y + 4.0,
                              "size": 9.0},
                    style="card-icon", text=icon_key,
                    data={"strategyId": run["strategyIds"][ii]}))
            if run["iconKeys"]:
                inner_y += 14.0
        height = inner_y - y + 8.0
        frame = SceneNode(
            kind="rect", id=f"card-frame-{block_id}",
            geometry={"x": x0, "y": y, "width": config.card_width,
                      "height": height},
            style=_style("card", block_id in hl["blocks"]))
        cards.append(SceneNode(
            kind="group", id=f"card-{block_id}", handle=("block", block_id),
            data={"sessionId": record["sessionId"], "turnId": record["turnId"]},
            children=(frame, *parts)))
        y += height + 8.0
    return SceneNode(kind="group", id="content-view", children=tuple(cards))


# ---------------------------------------------------------------------------


def build_scene(corpus: DebateCorpus, config: LayoutConfig,
                filt: FilterState | None = None,
                views: tuple[str, ...] = ALL_VIEWS,
                index: CorpusIndex | None = None,
                process_layout: ProcessLayout | None = None) -> SceneGraph:
    """Assemble the scene for the requested view subtrees under a filter."""
    filt = filt or FilterState()
    index = index or CorpusIndex(corpus)
    _resolve_filter(filt, index)
    if filt.clash_point and filt.chord_color_mode != "clash":
        filt = replace(filt, chord_color_mode="clash")
    hl = _highlights(filt, index)

    layout = process_layout or build_process_layout(corpus, config, index)
    interactions = analytics.interactions_from_paths(corpus, index)
    if filt.clash_point:
        interactions = [i for i in interactions
                        if i.clash_point_id == filt.clash_point]
    if filt.chord_color_mode == "clash" or filt.clash_point:
        angles = block_chord_angles(corpus, list(layout.session_arcs), index)
        chords = layout_chords(interactions, angles, corpus, mode="clash")
    else:
        chords = list(layout.chords)

    max_r = layout.max_radius()
    strategy_x0 = config.pole_origin[0] + max_r + config.view_gap
    strategy = layout_strategy(corpus, list(layout.circles), config, index,
                               x_origin=strategy_x0)

    subtrees = []
    if "session" in views:
        subtrees.append(_session_view(corpus, index, layout, config, hl))
    if "process" in views:
        subtrees.append(_process_view(corpus, index, layout, config, filt, hl,
                                      chords, bool(filt.clash_point)))
    if "strategy" in views:
        subtrees.append(_strategy_view(corpus, index, strategy, config, hl))
    if "content" in views:
        content_x0 = (strategy.x_extent + config.view_gap if "strategy" in views
                      else config.pole_origin[0] + max_r + config.view_gap)
        content_y0 = config.pole_origin[1] - max_r
        subtrees.append(_content_view(corpus, index, config, filt, hl,
                                      content_x0, content_y0))

    per_clash: dict[str, int] = {}
    for inter in analytics.interactions_from_paths(corpus, index):
        per_clash[inter.clash_point_id] = per_clash.get(inter.clash_point_id, 0) + 1
    meta = {
        "views": list(views),
        "filter": filt.to_dict(),
        "highlights": hl,
        "scrollTarget": filt.block,
        "palette": {c.color_key: palette_color(c.color_key)
                    for c in corpus.clash_points},
        "legend": {
            "clashPoints": [{"id": c.id, "label": c.label,
                             "colorKey": c.color_key,
                             "interactions": per_clash.get(c.id, 0)}
                            for c in corpus.clash_points],
            "strategies": [{"id": e.id, "name": e.name, "iconKey": e.icon_key,
                            "description": e.description}
                           for e in corpus.strategy_catalog.entries],
        },
        "counts": {"chords": len(chords),
                   "sessions": len(corpus.sessions),
                   "blocks": len(corpus.blocks)},
        "warnings": list(layout.warnings),
    }
    root = SceneNode(kind="group", id="scene", children=tuple(subtrees))
    return SceneGraph(meta=meta, root=root)
