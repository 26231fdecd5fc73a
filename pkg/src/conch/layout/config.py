"""Free parameters of the layout engine, with validation and JSON round-trip."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class LayoutConfig:
    pole_origin: tuple[float, float] = (0.0, 0.0)
    chord_circle_radius: float = 60.0
    ring_gap: float = 2.0
    rho_min: float = 12.0
    rho_max: float = 28.0
    s_min: float = 240.0
    s_max: float = 720.0
    phi_min: float = math.pi / 3.0
    phi_max: float = 2.0 * math.pi
    pitch_fraction: float = 0.3
    ring_fraction: float = 0.25
    font_min: float = 6.0
    font_max: float = 16.0
    arc_tolerance: float = 1e-6
    # chord circle
    chord_arc_gap: float = 0.05
    # strategy view
    unit_width: float = 4.0
    unit_height: float = 5.0
    lane_gap: float = 2.0
    column_gap: float = 8.0
    icon_box_size: float = 14.0
    icon_area_gap: float = 24.0
    view_gap: float = 60.0
    # content view
    card_width: float = 240.0
    card_font: float = 9.0

    def validate(self) -> None:
        problems = []
        if not 0.0 < self.s_min < self.s_max:
            problems.append(f"need 0 < s_min < s_max, got {self.s_min}, {self.s_max}")
        if not 0.0 < self.phi_min < self.phi_max <= 2.0 * math.pi + 1e-12:
            problems.append(f"need 0 < phi_min < phi_max <= 2*pi, got "
                            f"{self.phi_min}, {self.phi_max}")
        if not 0.0 < self.pitch_fraction < 1.0:
            problems.append(f"pitch fraction must be in (0,1), got {self.pitch_fraction}")
        if not 0.0 < self.ring_fraction < 1.0:
            problems.append(f"ring fraction must be in (0,1), got {self.ring_fraction}")
        if not 0.0 < self.rho_min <= self.rho_max:
            problems.append(f"need 0 < rho_min <= rho_max, got {self.rho_min}, {self.rho_max}")
        if not 0.0 < self.font_min <= self.font_max:
            problems.append(f"need 0 < font_min <= font_max, got {self.font_min}, {self.font_max}")
        if self.chord_circle_radius <= 0.0:
            problems.append("chord circle radius must be positive")
        if self.ring_gap < 0.0:
            problems.append("ring gap must be nonnegative")
        # the band between consecutive spirals must stay wider than the gap
        if (1.0 - self.pitch_fraction) * 2.0 * self.rho_min <= self.ring_gap:
            problems.append("(1-p)*2*rho_min must exceed ring gap or rings collapse")
        if self.arc_tolerance <= 0.0 or self.arc_tolerance >= 1e-2:
            problems.append(f"arc tolerance out of range: {self.arc_tolerance}")
        if problems:
            raise ValueError("; ".join(problems))


_JSON_KEYS = {
    "pole_origin": "poleOrigin",
    "chord_circle_radius": "chordCircleRadius",
    "ring_gap": "ringGap",
    "rho_min": "rhoMin",
    "rho_max": "rhoMax",
    "s_min": "sMin",
    "s_max": "sMax",
    "phi_min": "phiMin",
    "phi_max": "phiMax",
    "pitch_fraction": "pitchFraction",
    "ring_fraction": "ringFraction",
    "font_min": "fontMin",
    "font_max": "fontMax",
    "arc_tolerance": "arcTolerance",
    "chord_arc_gap": "chordArcGap",
    "unit_width": "unitWidth",
    "unit_height": "unitHeight",
    "lane_gap": "laneGap",
    "column_gap": "columnGap",
    "icon_box_size": "iconBoxSize",
    "icon_area_gap": "iconAreaGap",
    "view_gap": "viewGap",
    "card_width": "cardWidth",
    "card_font": "cardFont",
}
_FIELD_KEYS = {v: k for k, v in _JSON_KEYS.items()}


def config_to_dict(config: LayoutConfig) -> dict:
    out = {}
    for f in fields(LayoutConfig):
        value = getattr(config, f.name)
        out[_JSON_KEYS[f.name]] = list(value) if isinstance(value, tuple) else value
    return out


def config_from_dict(doc: dict) -> LayoutConfig:
    unknown = sorted(set(doc) - set(_FIELD_KEYS))
    if unknown:
        raise ValueError(f"unknown layout config keys: {unknown}")
    kwargs = {_FIELD_KEYS[k]: v for k, v in doc.items()}
    if "pole_origin" in kwargs:
        kwargs["pole_origin"] = tuple(kwargs["pole_origin"])
    config = replace(LayoutConfig(), **kwargs)
    config.validate()
    return config
