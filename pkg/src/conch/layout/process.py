"""Process view geometry: session circles, spiral segments, chord circle,
chords, clash-point ring, disagreement sectors, fitted labels.

Angles are measured from the vertical up-axis, increasing clockwise; a point
at polar (r, theta) maps to (cx + r*sin theta, cy - r*cos theta) in the y-down
output plane. Circle centers and spiral starts sit on the up-axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .. import analytics
from ..model import CorpusIndex, DebateCorpus, Side
from .config import LayoutConfig
from .spiral import segment_arc, solve_angle_for_arc
from .text import LabelFit, fit_label


@dataclass(frozen=True)
class SessionCircle:
    session_id: str
    distance: float
    radius: float
    aff_share: float
    neg_share: float


@dataclass(frozen=True)
class BlockSubArc:
    block_id: str
    theta0: float
    theta1: float
    side: Side


@dataclass(frozen=True)
class SpiralSegment:
    session_id: str
    start_radius: float
    pitch: float
    central_angle: float
    start_angle: float
    sub_arcs: tuple[BlockSubArc, ...]
    target_arc: float
    realized_arc: float
    clamped: bool

    @property
    def clockwise(self) -> bool:
        return True


@dataclass(frozen=True)
class SessionArc:
    """One session's share of the chord circle."""
    session_id: str
    start_angle: float
    sweep: float


@dataclass(frozen=True)
class ChordShape:
    disagreement_id: str
    clash_point_id: str
    from_block_id: str
    to_block_id: str
    from_angle: float
    to_angle: float
    same_side: bool
    color_mode: str
    #: one entry for mono/clash, two (from, to) for bicolor
    colors: tuple[str, ...]


@dataclass(frozen=True)
class RingSection:
    session_id: str
    clash_point_id: str
    theta0: float
    theta1: float
    inner_radius: float
    outer_radius: float
    share: float


@dataclass(frozen=True)
class SectorBlock:
    session_id: str
    disagreement_id: str
    theta0: float
    theta1: float
    inner_radius: float
    outer_radius: float
    block_count: int
    label: LabelFit
    viewpoints: LabelFit
    icon_keys: tuple[str, ...]


@dataclass(frozen=True)
class ProcessLayout:
    circles: tuple[SessionCircle, ...]
    segments: tuple[SpiralSegment, ...]
    session_arcs: tuple[SessionArc, ...]
    chords: tuple[ChordShape, ...]
    ring_sections: tuple[RingSection, ...]
    sector_blocks: tuple[SectorBlock, ...]
    warnings: tuple[str, ...]

    def max_radius(self) -> float:
        r = 0.0
        for c in self.circles:
            r = max(r, c.distance + c.radius)
        for s in self.sector_blocks:
            r = max(r, s.outer_radius)
        for s in self.ring_sections:
            r = max(r, s.outer_radius)
        for seg in self.segments:
            r = max(r, seg.start_radius + seg.pitch * seg.central_angle)
        return r


def _affine_targets(lengths: list[int | float], lo_v: float, hi_v: float) -> list[float]:
    l_lo, l_hi = min(lengths), max(lengths)
    if l_hi == l_lo:
        return [0.5 * (lo_v + hi_v)] * len(lengths)
    scale = (hi_v - lo_v) / (l_hi - l_lo)
    return [lo_v + (x - l_lo) * scale for x in lengths]


def layout_session_circles(session_lengths: list[tuple[str, int]],
                           config: LayoutConfig,
                           side_splits: list[tuple[float, float]] | None = None,
                           ) -> list[SessionCircle]:
    """Tangent circle column: radii affine in session length, centers stacked."""
    if not session_lengths:
        return []
    radii = _affine_targets([n for _, n in session_lengths],
                            config.rho_min, config.rho_max)
    splits = side_splits or [(0.5, 0.5)] * len(session_lengths)
    circles = []
    d = config.chord_circle_radius + config.ring_gap + radii[0]
    for i, ((session_id, _), rho) in enumerate(zip(session_lengths, radii)):
        if i:
            d += radii[i - 1] + rho
        aff, neg = splits[i]
        circles.append(SessionCircle(session_id, d, rho, aff, neg))
    return circles


def _deltas(circles: list[SessionCircle]) -> list[float]:
    out = []
    for i, circle in enumerate(circles):
        if i + 1 < len(circles):
            out.append(circles[i + 1].distance - circle.distance)
        else:
            out.append(2.0 * circle.radius)
    return out


def _boundary_chain(total_angle: float, weights: list[float]) -> list[float]:
    """Cumulative boundaries over [0, total_angle]; exact at both ends."""
    total = sum(weights)
    if total <= 0:
        boundaries = [total_angle * i / len(weights) for i in range(len(weights))]
    else:
        acc = 0.0
        boundaries = []
        for w in weights:
            boundaries.append(total_angle * (acc / total))
            acc += w
    boundaries.append(total_angle)
    return boundaries


def layout_spirals(corpus: DebateCorpus, circles: list[SessionCircle],
                   config: LayoutConfig, index: CorpusIndex | None = None,
                   ) -> tuple[list[SpiralSegment], list[str]]:
    """Spiral segments with a single global arc scale.

    Targets are affine in session content length (bounded contrast by
    construction); the global scale k is the largest value keeping every
    segment under the angle cap, found by bisection. Segments whose scaled
    target falls under the angle floor are clamped to phi_min with a warning.
    """
    index = index or CorpusIndex(corpus)
    sessions = sorted(corpus.sessions, key=lambda s: s.index)
    if not sessions:
        return [], []
    lengths = []
    for session in sessions:
        lengths.append(sum(index.blocks[b].content_length
                           for b in index.session_blocks[session.id]))
    targets = _affine_targets(lengths, config.s_min, config.s_max)
    deltas = _deltas(circles)
    p = config.pitch_fraction

    caps = [segment_arc(c.distance, p * dl, config.phi_max)
            for c, dl in zip(circles, deltas)]
    ratios = [cap / t for cap, t in zip(caps, targets)]
    lo, hi = 0.0, 2.0 * min(ratios)
    for _ in range(96):
        mid = 0.5 * (lo + hi)
        if all(mid * t <= cap for t, cap in zip(targets, caps)):
            lo = mid
        else:
            hi = mid
    k = lo

    segments = []
    warnings = []
    for session, circle, delta, target in zip(sessions, circles, deltas, targets):
        scaled = k * target
        floor_arc = segment_arc(circle.distance, p * delta, config.phi_min)
        clamped = False
        if scaled < floor_arc:
            phi = config.phi_min
            warnings.append(
                f"AngleFloorUnmet: session {session.id} target {scaled:.3f} "
                f"under floor arc {floor_arc:.3f}; clamped to phi_min")
            clamped = True
        else:
            phi = solve_angle_for_arc(circle.distance, p * delta, scaled,
                                      phi_min=config.phi_min,
                                      phi_max=config.phi_max,
                                      tolerance=config.arc_tolerance)
            phi = min(phi, config.phi_max)
        realized = segment_arc(circle.distance, p * delta, phi)

        block_ids = index.session_blocks[session.id]
        weights = [index.blocks[b].content_length for b in block_ids]
        bounds = _boundary_chain(phi, weights) if block_ids else [0.0]
        sub_arcs = tuple(
            BlockSubArc(b, bounds[j], bounds[j + 1], index.blocks[b].side)
            for j, b in enumerate(block_ids))
        segments.append(SpiralSegment(
            session_id=session.id, start_radius=circle.distance,
            pitch=(p * delta) / phi, central_angle=phi, start_angle=0.0,
            sub_arcs=sub_arcs, target_arc=scaled, realized_arc=realized,
            clamped=clamped))
    return segments, warnings


def layout_chord_circle(corpus: DebateCorpus, config: LayoutConfig,
                        index: CorpusIndex | None = None) -> list[SessionArc]:
    """Session arcs around the inner circle, clockwise from the top."""
    index = index or CorpusIndex(corpus)
    sessions = sorted(corpus.sessions, key=lambda s: s.index)
    if not sessions:
        return []
    n = len(sessions)
    gap = min(config.chord_arc_gap, 0.25 * 2.0 * math.pi / n)
    available = 2.0 * math.pi - n * gap
    lengths = [sum(index.blocks[b].content_length
                   for b in index.session_blocks[s.id]) for s in sessions]
    total = sum(lengths)
    weights = lengths if total > 0 else [1] * n
    total = sum(weights)
    arcs = []
    angle = 0.5 * gap
    for session, w in zip(sessions, weights):
        sweep = available * (w / total)
        arcs.append(SessionArc(session.id, angle, sweep))
        angle += sweep + gap
    return arcs


def block_chord_angles(corpus: DebateCorpus, arcs: list[SessionArc],
                       index: CorpusIndex | None = None) -> dict[str, float]:
    """Angle of each block's content midpoint within its session arc."""
    index = index or CorpusIndex(corpus)
    arc_by_session = {a.session_id: a for a in arcs}
    out: dict[str, float] = {}
    for session_id, block_ids in index.session_blocks.items():
        arc = arc_by_session.get(session_id)
        if arc is None:
            continue
        lengths = [index.blocks[b].content_length for b in block_ids]
        total = sum(lengths)
        prefix = 0.0
        for j, (block_id, length) in enumerate(zip(block_ids, lengths)):
            if total > 0:
                fraction = (prefix + 0.5 * length) / total
            else:
                fraction = (j + 0.5) / len(block_ids)
            out[block_id] = arc.start_angle + fraction * arc.sweep
            prefix += length
    return out


def layout_chords(interactions: list[analytics.Interaction],
                  angles: dict[str, float], corpus: DebateCorpus,
                  mode: str = "side") -> list[ChordShape]:
    """Chord shapes for the given interactions.

    mode "side": same-side chords are one run in the side color, cross-side
    chords split into two half-length runs. mode "clash": every chord takes
    its clash point's color key.
    """
    if mode not in ("side", "clash"):
        raise ValueError(f"unknown chord color mode {mode!r}")
    blocks = {b.id: b for b in corpus.blocks}
    clash_colors = {c.id: c.color_key for c in corpus.clash_points}
    chords = []
    for inter in interactions:
        a, b = blocks[inter.from_block_id], blocks[inter.to_block_id]
        if mode == "clash":
            color_mode = "clashColor"
            colors: tuple[str, ...] = (clash_colors.get(inter.clash_point_id, ""),)
        elif inter.same_side:
            color_mode = "monoBySide"
            colors = (a.side.color,)
        else:
            color_mode = "bicolorBySide"
            colors = (a.side.color, b.side.color)
        chords.append(ChordShape(
            disagreement_id=inter.disagreement_id,
            clash_point_id=inter.clash_point_id,
            from_block_id=inter.from_block_id,
            to_block_id=inter.to_block_id,
            from_angle=angles[inter.from_block_id],
            to_angle=angles[inter.to_block_id],
            same_side=inter.same_side,
            color_mode=color_mode,
            colors=colors))
    return chords


def layout_ring_and_sectors(corpus: DebateCorpus, circles: list[SessionCircle],
                            segments: list[SpiralSegment], config: LayoutConfig,
                            index: CorpusIndex | None = None,
                            ) -> tuple[list[RingSection], list[SectorBlock]]:
    """Clash-share ring band and disagreement sector band outside each spiral."""
    index = index or CorpusIndex(corpus)
    deltas = _deltas(circles)
    disagreements = {d.id: d for d in corpus.disagreements}
    catalog = corpus.strategy_catalog
    ring_sections: list[RingSection] = []
    sector_blocks: list[SectorBlock] = []
    p, q, g = config.pitch_fraction, config.ring_fraction, config.ring_gap

    for circle, segment, delta in zip(circles, segments, deltas):
        width = (1.0 - p) * delta - g
        if width <= 0:
            continue
        r_base = circle.distance + p * delta
        ring_r0, ring_r1 = r_base, r_base + q * width
        sect_r0, sect_r1 = r_base + q * width, r_base + width
        phi = segment.central_angle

        shares = analytics.clash_point_shares(circle.session_id, corpus, index)
        if shares:
            bounds = _boundary_chain(phi, [s for _, s in shares])
            for j, (cp_id, share) in enumerate(shares):
                ring_sections.append(RingSection(
                    circle.session_id, cp_id, bounds[j], bounds[j + 1],
                    ring_r0, ring_r1, share))

        counts = analytics.disagreement_block_counts(circle.session_id, corpus, index)
        if counts:
            bounds = _boundary_chain(phi, [c for _, c in counts])
            mid_r = 0.5 * (sect_r0 + sect_r1)
            thickness = sect_r1 - sect_r0
            for j, (dis_id, count) in enumerate(counts):
                theta0, theta1 = bounds[j], bounds[j + 1]
                dis = disagreements[dis_id]
                box_w = max(1.0, mid_r * (theta1 - theta0) - 2.0)
                label = fit_label(dis.label, box_w, 0.55 * thickness,
                                  config.font_min, config.font_max)
                viewpoint_text = (f"{dis.affirmative_viewpoint} / "
                                  f"{dis.negative_viewpoint}")
                viewpoints = fit_label(viewpoint_text, box_w, 0.28 * thickness,
                                       config.font_min,
                                       max(config.font_min, label.font_size - 1.0))
                icon_ids = set()
                for block_id in index.session_blocks[circle.session_id]:
                    block = index.blocks[block_id]
                    if dis_id in block.disagreement_ids:
                        icon_ids.update(t.strategy_id for t in block.strategy_tags)
                entries = catalog.by_id()
                icons = tuple(entries[s].icon_key
                              for s in sorted(icon_ids, key=catalog.order)
                              if s in entries)
                sector_blocks.append(SectorBlock(
                    circle.session_id, dis_id, theta0, theta1,
                    sect_r0, sect_r1, count, label, viewpoints, icons))
    return ring_sections, sector_blocks


def build_process_layout(corpus: DebateCorpus, config: LayoutConfig,
                         index: CorpusIndex | None = None) -> ProcessLayout:
    """Assemble the full process view for a corpus; pure and deterministic."""
    index = index or CorpusIndex(corpus)
    sessions = sorted(corpus.sessions, key=lambda s: s.index)
    lengths = [(s.id, sum(index.blocks[b].content_length
                          for b in index.session_blocks[s.id])) for s in sessions]
    splits = [analytics.side_proportions(s.id, corpus, index) for s in sessions]
    circles = layout_session_circles(lengths, config, splits)
    segments, warnings = layout_spirals(corpus, circles, config, index)
    arcs = layout_chord_circle(corpus, config, index)
    angles = block_chord_angles(corpus, arcs, index)
    interactions = analytics.interactions_from_paths(corpus, index)
    chords = layout_chords(interactions, angles, corpus, mode="side")
    rings, sectors = layout_ring_and_sectors(corpus, circles, segments, config, index)
    return ProcessLayout(
        circles=tuple(circles), segments=tuple(segments),
        session_arcs=tuple(arcs), chords=tuple(chords),
        ring_sections=tuple(rings), sector_blocks=tuple(sectors),
        warnings=tuple(warnings))
