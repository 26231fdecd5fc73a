"""Label fitting inside sector boxes.

Width estimation uses a per-character advance table (em units) rather than
real font metrics, so fitted sizes are identical on every platform and golden
files stay portable. CJK characters get a fixed full-width advance and may
break anywhere; Latin text wraps at spaces.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..textutil import is_cjk_char

LINE_HEIGHT = 1.2
ELLIPSIS = "…"

# advances in em for common Latin glyphs; anything absent falls back to 0.6
_ADVANCES = {}
for _chars, _adv in (
    ("iljI.,:;'|!", 0.28),
    ("ftr()[]{}\"", 0.34),
    (" ", 0.30),
    ("abcdeghknopqsuvxyz", 0.52),
    ("mw", 0.80),
    ("ABCDEFGHKNOPQRSTUVXYZ", 0.66),
    ("MW", 0.88),
    ("0123456789", 0.55),
    ("-_=+*/\\&%$#@?", 0.55),
):
    for _c in _chars:
        _ADVANCES[_c] = _adv

CJK_ADVANCE = 1.0
DEFAULT_ADVANCE = 0.6


def char_advance(ch: str) -> float:
    """Advance of one character in em units."""
    if is_cjk_char(ch):
        return CJK_ADVANCE
    return _ADVANCES.get(ch, DEFAULT_ADVANCE)


def text_em_width(text: str) -> float:
    return sum(char_advance(c) for c in text)


def text_width(text: str, font_size: float) -> float:
    return text_em_width(text) * font_size


def _atoms(text: str) -> list[tuple[str, str]]:
    """Break text into (glue, atom) units: words, with CJK chars split out."""
    out: list[tuple[str, str]] = []
    for chunk_index, chunk in enumerate(text.split()):
        glue = " " if chunk_index else ""
        buf = ""
        for ch in chunk:
            if is_cjk_char(ch):
                if buf:
                    out.append((glue, buf))
                    glue, buf = "", ""
                out.append((glue, ch))
                glue = ""
            else:
                buf += ch
        if buf:
            out.append((glue, buf))
    return out


def wrap_lines(text: str, box_width: float, font_size: float) -> list[str] | None:
    """Greedy wrap; None when some unbreakable atom exceeds the box width."""
    atoms = _atoms(text)
    if not atoms:
        return []
    lines: list[str] = []
    current = ""
    current_w = 0.0
    for glue, atom in atoms:
        atom_w = text_width(atom, font_size)
        glue_w = text_width(glue, font_size)
        if atom_w > box_width:
            return None
        if current and current_w + glue_w + atom_w <= box_width:
            current += glue + atom
            current_w += glue_w + atom_w
        elif current:
            lines.append(current)
            current, current_w = atom, atom_w
        else:
            current, current_w = atom, atom_w
    lines.append(current)
    return lines


@dataclass(frozen=True)
class LabelFit:
    font_size: float
    lines: tuple[str, ...]
    truncated: bool

    @property
    def needs_tooltip(self) -> bool:
        return self.truncated


def _fits(text: str, box_width: float, box_height: float, font_size: float,
          ) -> list[str] | None:
    lines = wrap_lines(text, box_width, font_size)
    if lines is None:
        return None
    if len(lines) * LINE_HEIGHT * font_size > box_height:
        return None
    return lines


def font_steps(font_min: float, font_max: float) -> list[float]:
    """Candidate sizes in 0.5 steps anchored at font_max, descending order."""
    steps = []
    size = font_max
    while size >= font_min - 1e-9:
        steps.append(size)
        size -= 0.5
    return steps


def _truncate(text: str, box_width: float, box_height: float,
              font_size: float) -> tuple[str, ...]:
    max_lines = max(1, int(box_height // (LINE_HEIGHT * font_size)))
    ellipsis_w = text_width(ELLIPSIS, font_size)
    lines: list[str] = []
    current = ""
    current_w = 0.0
    for ch in "".join(g + a for g, a in _atoms(text)):
        w = text_width(ch, font_size)
        if len(lines) == max_lines - 1:
            if current_w + w + ellipsis_w > box_width:
                lines.append(current + ELLIPSIS)
                return tuple(lines)
            current += ch
            current_w += w
        elif current_w + w > box_width and current:
            lines.append(current)
            current, current_w = ch, w
        else:
            current += ch
            current_w += w
    lines.append(current + ELLIPSIS)
    return tuple(lines)


def fit_label(text: str, box_width: float, box_height: float,
              font_min: float, font_max: float) -> LabelFit:
    """Largest 0.5-step font at which the wrapped text fits the box.

    Binary search over the descending step list; the fit predicate is monotone
    (anything that fits at a size fits at every smaller size), so this matches
    an exhaustive scan. When even font_min overflows, the text is truncated
    with an ellipsis at font_min and flagged for a tooltip.
    """
    if box_width <= 0.0 or box_height <= 0.0 or not text.strip():
        return LabelFit(font_min, (), bool(text.strip()))
    steps = font_steps(font_min, font_max)
    # steps[i] fits for i >= first_fit; find the leftmost fitting index
    lo, hi = 0, len(steps) - 1
    best: tuple[float, list[str]] | None = None
    if _fits(text, box_width, box_height, steps[0]) is not None:
        best = (steps[0], _fits(text, box_width, box_height, steps[0]) or [])
    elif _fits(text, box_width, box_height, steps[-1]) is None:
        best = None
    else:
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if _fits(text, box_width, box_height, steps[mid]) is not None:
                hi = mid
            else:
                lo = mid
        lines = _fits(text, box_width, box_height, steps[hi])
        best = (steps[hi], lines or [])
    if best is not None:
        return LabelFit(best[0], tuple(best[1]), False)
    return LabelFit(font_min, _truncate(text, box_width, box_height, font_min), True)
