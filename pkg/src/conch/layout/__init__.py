"""Layout engine: process view and strategy view geometry."""
from .config import LayoutConfig, config_from_dict, config_to_dict
from .process import (
    BlockSubArc, ChordShape, ProcessLayout, RingSection, SectorBlock,
    SessionArc, SessionCircle, SpiralSegment, block_chord_angles,
    build_process_layout, layout_chord_circle, layout_chords,
    layout_ring_and_sectors, layout_session_circles, layout_spirals,
)
from .spiral import arc_length, arc_length_quad, segment_arc, solve_angle_for_arc
from .strategy import (
    CoLink, DashedLink, IconBox, StrategyColumn, StrategyLayout, StrategyRow,
    UnitRect, layout_strategy,
)
from .text import LabelFit, fit_label, font_steps, text_width, wrap_lines

__all__ = [
    "LayoutConfig", "config_from_dict", "config_to_dict",
    "BlockSubArc", "ChordShape", "ProcessLayout", "RingSection", "SectorBlock",
    "SessionArc", "SessionCircle", "SpiralSegment", "block_chord_angles",
    "build_process_layout", "layout_chord_circle", "layout_chords",
    "layout_ring_and_sectors", "layout_session_circles", "layout_spirals",
    "arc_length", "arc_length_quad", "segment_arc", "solve_angle_for_arc",
    "CoLink", "DashedLink", "IconBox", "StrategyColumn", "StrategyLayout",
    "StrategyRow", "UnitRect", "layout_strategy",
    "LabelFit", "fit_label", "font_steps", "text_width", "wrap_lines",
]
