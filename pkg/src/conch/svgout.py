"""Deterministic SVG serialization of a scene graph.

Numbers are written with exactly four decimal places (negative zero is
normalized), node order follows the scene tree, and all styling lives in one
fixed stylesheet, so the same scene always yields identical bytes.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

from .layout.text import text_em_width
from .scene import CSS_COLORS, FALLBACK_COLOR, SceneGraph, SceneNode

SPIRAL_STEP = 0.03

ICON_GLYPHS = {
    "handshake": "\U0001f91d",
    "eye": "\U0001f441",
    "gears": "⚙",
    "document": "\U0001f4c4",
    "question": "❓",
    "frame": "\U0001f504",
}
ICON_FALLBACK = "◆"

#: chord run colors by name; clash color keys resolve through the palette
COLOR_VALUES = {"white": "#f5f5f5", "black": "#1a1a1a"}

_ANCHORS = {0.0: "start", 1.0: "middle", 2.0: "end"}

_BASE_CSS = """\
text { font-family: 'DejaVu Sans', sans-serif; }
.circle-outline { fill: none; stroke: #555555; stroke-width: 1; }
.side-affirmative { fill: #fafafa; stroke: #777777; stroke-width: 0.5; }
.side-negative { fill: #1a1a1a; stroke: #1a1a1a; stroke-width: 0.5; }
.stroke-affirmative { fill: none; stroke: #bdbdbd; stroke-width: 2.4; }
.stroke-negative { fill: none; stroke: #1a1a1a; stroke-width: 2.4; }
.session-arc { fill: #8a8a8a; }
.chord-backdrop { fill: #e9e9e9; }
.chord { fill: none; stroke-width: 1.2; stroke-opacity: 0.85; }
.ring-section { stroke: #ffffff; stroke-width: 0.4; }
.sector-block { fill: #f7f7f7; stroke: #aaaaaa; stroke-width: 0.5; }
.sector-label { fill: #222222; }
.sector-viewpoints { fill: #444444; }
.session-index { fill: #666666; }
.strategy-row { fill: none; stroke: #dddddd; stroke-width: 0.8; }
.strategy-column { fill: #f2f2f2; }
.unit { stroke: #666666; stroke-width: 0.4; }
.co-link { fill: none; stroke: #e45756; stroke-width: 1; }
.dashed-link { stroke: #999999; stroke-width: 0.8; }
.connector { stroke: #555555; stroke-width: 0.8; }
.icon-box { fill: #ffffff; stroke: #888888; }
.multiplicity { fill: #444444; }
.legend-text { fill: #222222; }
.card { fill: #ffffff; stroke: #cccccc; }
.card-identifier { font-weight: bold; fill: #111111; }
.card-digest { fill: #333333; }
.card-text { fill: #222222; }
.side-affirmative-text { fill: #777777; }
.side-negative-text { fill: #111111; }
.highlighted { stroke: #ff6d00 !important; stroke-width: 2.6 !important; }
"""


def _palette_css() -> str:
    rules = []
    for key, value in CSS_COLORS.items():
        rules.append(f".clash-{key} {{ fill: {value}; }}")
        rules.append(f".clash-{key}-dim {{ fill: {value}; fill-opacity: 0.18; }}")
        rules.append(f".clash-{key}-text {{ fill: {value}; }}")
    rules.append(f".clash- {{ fill: {FALLBACK_COLOR}; }}")
    return "\n".join(rules) + "\n"


def fmt(value: float) -> str:
    out = f"{value:.4f}"
    return "0.0000" if out == "-0.0000" else out


def _pt(cx: float, cy: float, r: float, theta: float) -> tuple[float, float]:
    return (cx + r * math.sin(theta), cy - r * math.cos(theta))


def _arc_points(cx, cy, r, a0, a1) -> list[tuple[float, float]]:
    """Split points so no single SVG arc spans more than half a turn."""
    sweep = a1 - a0
    pieces = max(1, math.ceil(abs(sweep) / math.pi - 1e-12))
    return [_pt(cx, cy, r, a0 + sweep * i / pieces) for i in range(pieces + 1)]


def _arc_band_path(g: dict) -> str:
    cx, cy, r0, r1 = g["cx"], g["cy"], g["r0"], g["r1"]
    a0, a1 = g["a0"], g["a1"]
    full = (a1 - a0) >= 2.0 * math.pi - 1e-9
    outer = _arc_points(cx, cy, r1, a0, a1)
    parts = [f"M {fmt(outer[0][0])} {fmt(outer[0][1])}"]
    for x, y in outer[1:]:
        parts.append(f"A {fmt(r1)} {fmt(r1)} 0 0 1 {fmt(x)} {fmt(y)}")
    if full:
        parts.append("Z")
        if r0 > 1e-9:
            # hole drawn with opposite winding so the ring stays hollow
            inner = _arc_points(cx, cy, r0, a0, a1)[::-1]
            parts.append(f"M {fmt(inner[0][0])} {fmt(inner[0][1])}")
            for x, y in inner[1:]:
                parts.append(f"A {fmt(r0)} {fmt(r0)} 0 0 0 {fmt(x)} {fmt(y)}")
            parts.append("Z")
    elif r0 > 1e-9:
        inner = _arc_points(cx, cy, r0, a0, a1)[::-1]
        parts.append(f"L {fmt(inner[0][0])} {fmt(inner[0][1])}")
        for x, y in inner[1:]:
            parts.append(f"A {fmt(r0)} {fmt(r0)} 0 0 0 {fmt(x)} {fmt(y)}")
        parts.append("Z")
    else:
        parts.append(f"L {fmt(cx)} {fmt(cy)}")
        parts.append("Z")
    return " ".join(parts)


def _spiral_path(g: dict) -> str:
    cx, cy, a, b = g["cx"], g["cy"], g["a"], g["b"]
    t0, t1 = g["t0"], g["t1"]
    thetas = []
    t = t0
    while t < t1:
        thetas.append(t)
        t += SPIRAL_STEP
    thetas.append(t1)
    parts = []
    for i, theta in enumerate(thetas):
        x, y = _pt(cx, cy, a + b * theta, theta)
        cmd = "M" if i == 0 else "L"
        parts.append(f"{cmd} {fmt(x)} {fmt(y)}")
    return " ".join(parts)


def _chord_colors(node: SceneNode) -> list[str]:
    raw = (node.data or {}).get("colors", "")
    out = []
    for name in raw.split("|"):
        if name in COLOR_VALUES:
            out.append(COLOR_VALUES[name])
        else:
            out.append(CSS_COLORS.get(name, FALLBACK_COLOR))
    return out or [FALLBACK_COLOR]


def _chord_elements(node: SceneNode, attrs: str) -> str:
    g = node.geometry
    p1 = (g["x1"], g["y1"])
    c = (g["cx"], g["cy"])
    p2 = (g["x2"], g["y2"])
    colors = _chord_colors(node)
    if len(colors) == 1:
        d = (f"M {fmt(p1[0])} {fmt(p1[1])} Q {fmt(c[0])} {fmt(c[1])} "
             f"{fmt(p2[0])} {fmt(p2[1])}")
        return f'<path{attrs} d="{d}" stroke="{colors[0]}"/>'
    # two half-length runs via midpoint subdivision of the quadratic
    c1 = (0.5 * (p1[0] + c[0]), 0.5 * (p1[1] + c[1]))
    c2 = (0.5 * (c[0] + p2[0]), 0.5 * (c[1] + p2[1]))
    mid = (0.25 * (p1[0] + 2.0 * c[0] + p2[0]), 0.25 * (p1[1] + 2.0 * c[1] + p2[1]))
    d1 = (f"M {fmt(p1[0])} {fmt(p1[1])} Q {fmt(c1[0])} {fmt(c1[1])} "
          f"{fmt(mid[0])} {fmt(mid[1])}")
    d2 = (f"M {fmt(mid[0])} {fmt(mid[1])} Q {fmt(c2[0])} {fmt(c2[1])} "
          f"{fmt(p2[0])} {fmt(p2[1])}")
    return (f'<g{attrs}><path d="{d1}" stroke="{colors[0]}"/>'
            f'<path d="{d2}" stroke="{colors[1]}"/></g>')


def _polyline_points(node: SceneNode) -> list[tuple[float, float]]:
    count = int((node.data or {}).get("pointCount", "0"))
    g = node.geometry
    return [(g[f"p{i}x"], g[f"p{i}y"]) for i in range(count)]


def _attrs(node: SceneNode) -> str:
    parts = [f' id={quoteattr(node.id)}', f' data-kind="{node.kind}"']
    if node.style:
        parts.append(f" class={quoteattr(node.style)}")
    if node.handle:
        parts.append(f" data-target-kind={quoteattr(node.handle[0])}")
        parts.append(f" data-target-id={quoteattr(node.handle[1])}")
    for key in sorted(node.data or {}):
        parts.append(f" data-{key.lower()}={quoteattr(str(node.data[key]))}")
    return "".join(parts)


def _element(node: SceneNode) -> str:
    g = node.geometry
    attrs = _attrs(node)
    kind = node.kind
    if kind == "group":
        inner = "".join(_element(c) for c in node.children)
        return f"<g{attrs}>{inner}</g>"
    if kind == "circle":
        return (f'<circle{attrs} cx="{fmt(g["cx"])}" cy="{fmt(g["cy"])}" '
                f'r="{fmt(g["r"])}"/>')
    if kind == "rect":
        return (f'<rect{attrs} x="{fmt(g["x"])}" y="{fmt(g["y"])}" '
                f'width="{fmt(g["width"])}" height="{fmt(g["height"])}"/>')
    if kind == "arcBand":
        return f'<path{attrs} d="{_arc_band_path(g)}"/>'
    if kind == "spiralStroke":
        return f'<path{attrs} d="{_spiral_path(g)}"/>'
    if kind == "chord":
        return _chord_elements(node, attrs)
    if kind == "polyline":
        pts = " ".join(f"{fmt(x)},{fmt(y)}" for x, y in _polyline_points(node))
        return f'<polyline{attrs} points="{pts}"/>'
    if kind == "dashedLine":
        return (f'<line{attrs} x1="{fmt(g["x1"])}" y1="{fmt(g["y1"])}" '
                f'x2="{fmt(g["x2"])}" y2="{fmt(g["y2"])}" '
                f'stroke-dasharray="4 3"/>')
    if kind == "text":
        anchor = _ANCHORS.get(g.get("anchor", 0.0), "start")
        return (f'<text{attrs} x="{fmt(g["x"])}" y="{fmt(g["y"])}" '
                f'font-size="{fmt(g["fontSize"])}" text-anchor="{anchor}">'
                f'{escape(node.text or "")}</text>')
    if kind == "icon":
        glyph = ICON_GLYPHS.get(node.text or "", ICON_FALLBACK)
        return (f'<text{attrs} x="{fmt(g["x"])}" y="{fmt(g["y"])}" '
                f'font-size="{fmt(g["size"])}" text-anchor="middle">'
                f"{glyph}</text>")
    raise ValueError(f"unknown scene node kind {kind!r}")


def _extend_bounds(node: SceneNode, box: list[float]) -> None:
    g = node.geometry

    def add(x: float, y: float) -> None:
        box[0] = min(box[0], x)
        box[1] = min(box[1], y)
        box[2] = max(box[2], x)
        box[3] = max(box[3], y)

    kind = node.kind
    if kind == "circle":
        add(g["cx"] - g["r"], g["cy"] - g["r"])
        add(g["cx"] + g["r"], g["cy"] + g["r"])
    elif kind == "arcBand":
        add(g["cx"] - g["r1"], g["cy"] - g["r1"])
        add(g["cx"] + g["r1"], g["cy"] + g["r1"])
    elif kind == "spiralStroke":
        r = g["a"] + g["b"] * g["t1"]
        r = max(r, g["a"])
        add(g["cx"] - r, g["cy"] - r)
        add(g["cx"] + r, g["cy"] + r)
    elif kind == "rect":
        add(g["x"], g["y"])
        add(g["x"] + g["width"], g["y"] + g["height"])
    elif kind in ("chord", "dashedLine"):
        add(g["x1"], g["y1"])
        add(g["x2"], g["y2"])
    elif kind == "polyline":
        for x, y in _polyline_points(node):
            add(x, y)
    elif kind == "text":
        width = text_em_width(node.text or "") * g["fontSize"]
        anchor = g.get("anchor", 0.0)
        if anchor == 1.0:
            add(g["x"] - 0.5 * width, g["y"] - g["fontSize"])
            add(g["x"] + 0.5 * width, g["y"] + 0.4 * g["fontSize"])
        elif anchor == 2.0:
            add(g["x"] - width, g["y"] - g["fontSize"])
            add(g["x"], g["y"] + 0.4 * g["fontSize"])
        else:
            add(g["x"], g["y"] - g["fontSize"])
            add(g["x"] + width, g["y"] + 0.4 * g["fontSize"])
    elif kind == "icon":
        add(g["x"] - g["size"], g["y"] - g["size"])
        add(g["x"] + g["size"], g["y"] + g["size"])
    for child in node.children:
        _extend_bounds(child, box)


def render_svg(scene: SceneGraph) -> str:
    """Serialize the scene to standalone SVG text; same scene, same bytes."""
    box = [math.inf, math.inf, -math.inf, -math.inf]
    _extend_bounds(scene.root, box)
    if math.isinf(box[0]) or box[0] > box[2]:
        box = [0.0, 0.0, 100.0, 100.0]
    pad = 24.0
    view = (box[0] - pad, box[1] - pad,
            box[2] - box[0] + 2.0 * pad, box[3] - box[1] + 2.0 * pad)
    body = _element(scene.root)
    css = _BASE_CSS + _palette_css()
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{fmt(view[0])} {fmt(view[1])} {fmt(view[2])} {fmt(view[3])}" '
        'font-family="sans-serif">'
        f"<style>{css}</style>"
        f"{body}"
        "</svg>\n"
    )
