"""Static SVG spacetime diagrams of a scenario.

Projection is the (x1, c*t) plane of a chosen frame, horizontal position and
vertical time, with light cones at 45 degrees.  Drawn per scenario: both
detector worldlines, the light cones through the origin, the signal branches,
the collapse surfaces anchored at both decisions (instantaneous plane and
backward light cone), and the labeled events of interest.  Output bytes are
deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .collapse import (
    BACKWARD_LIGHT_CONE,
    INSTANTANEOUS,
    CollapsePolicy,
    CollapseSurface,
    arrival_on_worldline,
    reduction_point_on_branch,
)
from .errors import GeometryError
from .kinematics import Worldline
from .minkowski import Boost, Event, boost
from .scenario import Geometry, ScenarioConfig, nominal_geometry


@dataclass(frozen=True)
class Segment:
    name: str
    a: tuple[float, float]  # (x1, t) in the projection frame
    b: tuple[float, float]
    style: str


@dataclass(frozen=True)
class DiagramSpec:
    """Projected drawables: line segments plus labeled events."""

    frame_zeta: float
    segments: tuple[Segment, ...]
    events: dict[str, Event]
    extents: tuple[float, float, float, float]  # xmin, xmax, tmin, tmax


def _project(e: Event, zeta: float) -> tuple[float, float]:
    p = boost(e, Boost(zeta))
    return (p.x1, p.t)


def build_spec(cfg: ScenarioConfig, frame_zeta: float = 0.0) -> DiagramSpec:
    """Assemble the drawable set for a scenario in the given frame."""
    g: Geometry = nominal_geometry(cfg)
    det_a, det_b = cfg.detector_a, cfg.detector_b
    w_a, w_b = det_a.worldline, det_b.worldline

    # Surfaces are anchored at the nominal arrival points; the sub-window
    # offset to the sharp decision is below drawing resolution.
    decision_a = g.arrival_a
    decision_b = g.arrival_b
    inst = CollapsePolicy(INSTANTANEOUS)
    blc = CollapsePolicy(BACKWARD_LIGHT_CONE)

    source_label = "S2" if cfg.source.mode == "lightlike" else "S"
    events: dict[str, Event] = {
        source_label: g.source,
        "A1": decision_a,
        "B2": decision_b,
    }

    def _try(name: str, fn):
        try:
            events[name] = fn()
        except GeometryError:
            pass

    surf_a_inst = CollapseSurface(decision_a, inst, det_a.zeta)
    surf_b_inst = CollapseSurface(decision_b, inst, det_b.zeta)
    surf_a_blc = CollapseSurface(decision_a, blc, det_a.zeta)
    surf_b_blc = CollapseSurface(decision_b, blc, det_b.zeta)
    _try("B1(inst)", lambda: arrival_on_worldline(surf_a_inst, w_b))
    _try("A2(inst)", lambda: arrival_on_worldline(surf_b_inst, w_a))
    _try("B1(blc)", lambda: arrival_on_worldline(surf_a_blc, w_b))
    _try("A2(blc)", lambda: arrival_on_worldline(surf_b_blc, w_a))
    _try("SB", lambda: reduction_point_on_branch(surf_b_blc, g.branch_a))
    _try("SA", lambda: reduction_point_on_branch(surf_a_blc, g.branch_b))

    projected = {name: _project(e, frame_zeta) for name, e in events.items()}
    xs = [p[0] for p in projected.values()] + [0.0]
    ts = [p[1] for p in projected.values()] + [0.0]
    span = max(max(xs) - min(xs), max(ts) - min(ts), 1e-6)
    margin = 0.2 * span
    xmin, xmax = min(xs) - margin, max(xs) + margin
    tmin, tmax = min(ts) - margin, max(ts) + margin

    segments: list[Segment] = []

    def _worldline_segment(name: str, w: Worldline, style: str):
        z_rel = w.zeta - frame_zeta
        beta = math.tanh(z_rel)
        segments.append(
            Segment(name, (beta * tmin, tmin), (beta * tmax, tmax), style)
        )

    _worldline_segment("worldline-A", w_a, "worldline")
    _worldline_segment("worldline-B", w_b, "worldline")

    reach = max(abs(xmin), abs(xmax), abs(tmin), abs(tmax))
    segments.append(Segment("lightcone+", (-reach, -reach), (reach, reach), "lightcone"))
    segments.append(Segment("lightcone-", (-reach, reach), (reach, -reach), "lightcone"))

    for name, branch in (("branch-S-A1", g.branch_a), ("branch-S-B2", g.branch_b)):
        segments.append(
            Segment(name, _project(branch.source, frame_zeta),
                    _project(branch.detection, frame_zeta), "signal")
        )

    # Collapse surfaces through each decision: the instantaneous plane of the
    # decider (slope tanh of its rapidity relative to the drawn frame) and
    # the two backward rays of the light cone.
    for tag, decision, zeta_d in (("A1", decision_a, det_a.zeta), ("B2", decision_b, det_b.zeta)):
        px, pt = _project(decision, frame_zeta)
        slope = math.tanh(zeta_d - frame_zeta)
        segments.append(
            Segment(
                f"plane-{tag}",
                (xmin, pt + slope * (xmin - px)),
                (xmax, pt + slope * (xmax - px)),
                "plane",
            )
        )
        drop = pt - tmin
        segments.append(Segment(f"blc-{tag}-left", (px, pt), (px - drop, tmin), "blc"))
        segments.append(Segment(f"blc-{tag}-right", (px, pt), (px + drop, tmin), "blc"))

    return DiagramSpec(
        frame_zeta=frame_zeta,
        segments=tuple(segments),
        events={name: events[name] for name in sorted(events)},
        extents=(xmin, xmax, tmin, tmax),
    )


_STYLES = {
    "worldline": 'stroke="#1f3d7a" stroke-width="1.6"',
    "lightcone": 'stroke="#aaaaaa" stroke-width="0.8" stroke-dasharray="6,4"',
    "signal": 'stroke="#b02a2a" stroke-width="1.4"',
    "plane": 'stroke="#2a7a2a" stroke-width="1.0" stroke-dasharray="3,3"',
    "blc": 'stroke="#7a2a7a" stroke-width="1.2"',
}

_WIDTH = 640.0
_HEIGHT = 640.0


def render_svg(spec: DiagramSpec) -> str:
    """Serialize a diagram; one line element per segment, one circle+text per
    labeled event."""
    xmin, xmax, tmin, tmax = spec.extents

    def sx(x: float) -> float:
        return (x - xmin) / (xmax - xmin) * _WIDTH

    def sy(t: float) -> float:
        return _HEIGHT - (t - tmin) / (tmax - tmin) * _HEIGHT

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{_HEIGHT:.0f}" viewBox="0 0 {_WIDTH:.0f} {_HEIGHT:.0f}">',
        f'<title>frame zeta={spec.frame_zeta:.6f}</title>',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for seg in spec.segments:
        style = _STYLES[seg.style]
        out.append(
            f'<line id="{seg.name}" x1="{sx(seg.a[0]):.3f}" y1="{sy(seg.a[1]):.3f}" '
            f'x2="{sx(seg.b[0]):.3f}" y2="{sy(seg.b[1]):.3f}" {style}/>'
        )
    for name, event in spec.events.items():
        px, pt = _project(event, spec.frame_zeta)
        x, y = sx(px), sy(pt)
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3.2" fill="black"/>')
        out.append(
            f'<text x="{x + 5.0:.3f}" y="{y - 5.0:.3f}" font-size="12" '
            f'font-family="sans-serif">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_scenario(cfg: ScenarioConfig, frame_zeta: float = 0.0) -> str:
    return render_svg(build_spec(cfg, frame_zeta))
