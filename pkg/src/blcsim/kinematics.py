"""Inertial worldlines, detectors with response windows, and signal branches.

Detector worldlines cross the spatial origin of the x1 axis at t = 0; sources
are placed by explicit event coordinates at the scenario level.  Signals are
straight timelike or lightlike segments between emission and arrival.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import GeometryError
from .minkowski import LIGHTLIKE, SPACELIKE, Event, interval

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Worldline:
    """Inertial trajectory x1 = t tanh(zeta) with constant transverse offsets.

    ``offsets`` are the (x2, x3) coordinates; the x1 intercept at t = 0 is
    fixed to zero by the shared coordinate convention.
    """

    zeta: float = 0.0
    offsets: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not math.isfinite(self.zeta):
            raise ValueError("worldline rapidity must be finite")

    @property
    def beta(self) -> float:
        return math.tanh(self.zeta)


def position_at(w: Worldline, t: float) -> Event:
    """Lab-frame event occupied by the worldline at lab time t."""
    return Event(t, t * math.tanh(w.zeta), w.offsets[0], w.offsets[1])


def event_at_rest_time(w: Worldline, t_rest: float) -> Event:
    """Lab-frame event occupied by the worldline at its own rest-frame time."""
    return Event(
        t_rest * math.cosh(w.zeta),
        t_rest * math.sinh(w.zeta),
        w.offsets[0],
        w.offsets[1],
    )


@dataclass(frozen=True)
class Detector:
    """A detector: worldline, response window, and measurement-axis set.

    The response window starts at rest-frame time ``t_start`` (the nominal
    signal arrival), lasts ``dt_window``, and the sharp decision falls
    ``pre_decision`` after the start, optionally jittered.  ``axes`` are unit
    3-vectors; ``axis_weights`` is the probability of picking each axis.
    """

    id: str
    worldline: Worldline = field(default_factory=Worldline)
    t_start: float = 0.0
    dt_window: float = 1.0
    pre_decision: float = 0.5
    axes: tuple[tuple[float, float, float], ...] = ((0.0, 0.0, 1.0),)
    axis_weights: tuple[float, ...] = (1.0,)
    jitter: float = 1.0  # 0 = sharp at t_start + pre_decision, 1 = full spread

    def __post_init__(self):
        if not 0.0 < self.pre_decision < self.dt_window:
            raise ValueError(
                f"detector {self.id}: need 0 < pre_decision < dt_window, "
                f"got {self.pre_decision} / {self.dt_window}"
            )
        if len(self.axes) != len(self.axis_weights) or not self.axes:
            raise ValueError(f"detector {self.id}: axes and weights must pair up")
        for ax in self.axes:
            n = math.sqrt(ax[0] ** 2 + ax[1] ** 2 + ax[2] ** 2)
            if abs(n - 1.0) > _UNIT_TOL:
                raise ValueError(f"detector {self.id}: axis {ax} is not unit length")
        if abs(sum(self.axis_weights) - 1.0) > _UNIT_TOL or min(self.axis_weights) < 0:
            raise ValueError(f"detector {self.id}: axis weights must be a distribution")
        if not 0.0 <= self.jitter <= 1.0:
            raise ValueError(f"detector {self.id}: jitter must lie in [0, 1]")

    @property
    def zeta(self) -> float:
        return self.worldline.zeta

    def window_start_event(self) -> Event:
        return event_at_rest_time(self.worldline, self.t_start)

    def window_end_event(self) -> Event:
        return event_at_rest_time(self.worldline, self.t_start + self.dt_window)


@dataclass(frozen=True)
class SignalBranch:
    """A causal signal segment from emission to arrival on a detector line."""

    source: Event
    detection: Event
    label: str

    def __post_init__(self):
        iv = interval(self.source, self.detection)
        if iv.kind == SPACELIKE:
            raise GeometryError(f"branch {self.label}: endpoints are spacelike-separated")
        if not self.detection.t > self.source.t:
            raise GeometryError(f"branch {self.label}: detection must follow emission")

    def point(self, s: float) -> Event:
        """Interpolate the segment; s = 0 is emission, s = 1 is arrival."""
        a, b = self.source, self.detection
        return Event(
            a.t + s * (b.t - a.t),
            a.x1 + s * (b.x1 - a.x1),
            a.x2 + s * (b.x2 - a.x2),
            a.x3 + s * (b.x3 - a.x3),
        )


def proper_time_between(e1: Event, e2: Event) -> float:
    """Invariant proper time along a causal segment; 0 for a null segment."""
    iv = interval(e1, e2)
    if iv.kind == SPACELIKE:
        raise GeometryError(f"no proper time for spacelike pair (s^2={iv.s_squared})")
    if iv.kind == LIGHTLIKE:
        return 0.0
    return math.sqrt(iv.s_squared)


def spacelike_measurements(dA: Detector, dB: Detector, tA: float, tB: float) -> bool:
    """True when no light signal can connect the two response windows.

    ``tA``/``tB`` are window-start times in each detector's rest frame.  The
    criterion compares the lab-frame window span against the spatial
    separation; positions are evaluated at both window endpoints and the
    worst case (smallest separation) must still win strictly.
    """
    wa, wb = dA.worldline, dB.worldline
    ends_a = (
        event_at_rest_time(wa, tA),
        event_at_rest_time(wa, tA + dA.dt_window),
    )
    ends_b = (
        event_at_rest_time(wb, tB),
        event_at_rest_time(wb, tB + dB.dt_window),
    )
    span = max(ends_a[1].t, ends_b[1].t) - min(ends_a[0].t, ends_b[0].t)
    separation = min(
        math.dist((ea.x1, ea.x2, ea.x3), (eb.x1, eb.x2, eb.x3))
        for ea in ends_a
        for eb in ends_b
    )
    return span < separation


def lightlike_branch(source: Event, w: Worldline, after: float) -> Event:
    """Earliest event on ``w`` after lab time ``after`` that light emitted at
    ``source`` can reach.

    Solves (t - t_s)^2 = |x_w(t) - x_s|^2 for t > max(after, t_s); the forward
    light cone of a point off a timelike line crosses it exactly once.
    """
    beta = w.beta
    dx0 = -source.x1  # worldline x1 at t=0 is 0
    d2 = w.offsets[0] - source.x2
    d3 = w.offsets[1] - source.x3
    dperp2 = d2 * d2 + d3 * d3

    # (t - ts)^2 - (beta t - xs)^2 - dperp^2 = 0
    a = 1.0 - beta * beta
    b = -2.0 * source.t + 2.0 * beta * source.x1
    c = source.t * source.t - source.x1 * source.x1 - dperp2
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise GeometryError("no light-cone crossing exists")
    if disc <= 1e-24 and abs(dx0 - beta * source.t) < 1e-12 and dperp2 < 1e-24:
        raise GeometryError("source lies on the worldline; crossing is degenerate")
    sq = math.sqrt(disc)
    lo = max(after, source.t)
    candidates = sorted(((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)))
    for t in candidates:
        if t > lo and t > source.t:
            return position_at(w, t)
    raise GeometryError(f"no forward light-cone crossing with t > {lo}")


def relative_to(w: Worldline, zeta_frame: float) -> Worldline:
    """The same worldline as seen from a frame boosted by ``zeta_frame``."""
    return Worldline(w.zeta - zeta_frame, w.offsets)
