"""Exact 1+3 Minkowski geometry: events, boosts along the first axis, intervals.

Conventions used throughout the package:

* natural units, c = 1; every time is stored as c*t in the same length unit,
* metric signature (+, -, -, -),
* boosts act along the first spatial axis and are parametrized by the
  rapidity ``zeta`` with tanh(zeta) = v/c, so successive boosts add.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TOL_LIGHTLIKE = 1e-9  # |s^2| below this counts as lightlike (O(1) geometry)

TIMELIKE = "timelike"
SPACELIKE = "spacelike"
LIGHTLIKE = "lightlike"


@dataclass(frozen=True)
class Event:
    """A point (c*t, x1, x2, x3) in Minkowski coordinates."""

    t: float
    x1: float
    x2: float = 0.0
    x3: float = 0.0

    def __post_init__(self):
        for v in (self.t, self.x1, self.x2, self.x3):
            if not math.isfinite(v):
                raise ValueError(f"event components must be finite, got {v!r}")


@dataclass(frozen=True)
class Boost:
    """A boost of rapidity ``zeta`` along x1 plus transverse translations."""

    zeta: float
    transverse_offsets: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not math.isfinite(self.zeta):
            raise ValueError("rapidity must be finite")

    @property
    def beta(self) -> float:
        return math.tanh(self.zeta)


@dataclass(frozen=True)
class IntervalClass:
    """Signed squared interval between two events and its causal kind."""

    s_squared: float
    kind: str


def boost(e: Event, b: Boost) -> Event:
    """Map lab coordinates to the boosted frame.

    t' = t cosh(zeta) - x1 sinh(zeta); x1' = -t sinh(zeta) + x1 cosh(zeta);
    transverse components are translated by the configured offsets.
    """
    ch = math.cosh(b.zeta)
    sh = math.sinh(b.zeta)
    t = e.t * ch - e.x1 * sh
    x1 = -e.t * sh + e.x1 * ch
    if not (math.isfinite(t) and math.isfinite(x1)):
        raise OverflowError(f"boost by zeta={b.zeta} overflowed on {e}")
    return Event(t, x1, e.x2 + b.transverse_offsets[0], e.x3 + b.transverse_offsets[1])


def inverse_boost(e: Event, b: Boost) -> Event:
    """Inverse of :func:`boost`: t = t' cosh + x1' sinh, x1 = t' sinh + x1' cosh."""
    ch = math.cosh(b.zeta)
    sh = math.sinh(b.zeta)
    t = e.t * ch + e.x1 * sh
    x1 = e.t * sh + e.x1 * ch
    if not (math.isfinite(t) and math.isfinite(x1)):
        raise OverflowError(f"inverse boost by zeta={b.zeta} overflowed on {e}")
    return Event(t, x1, e.x2 - b.transverse_offsets[0], e.x3 - b.transverse_offsets[1])


def classify(s_squared: float, tol: float = TOL_LIGHTLIKE) -> str:
    if abs(s_squared) <= tol:
        return LIGHTLIKE
    return TIMELIKE if s_squared > 0.0 else SPACELIKE


def interval(e1: Event, e2: Event) -> IntervalClass:
    """Invariant squared interval (dt)^2 - |dx|^2 with its causal class."""
    dt = e1.t - e2.t
    d1 = e1.x1 - e2.x1
    d2 = e1.x2 - e2.x2
    d3 = e1.x3 - e2.x3
    s2 = dt * dt - d1 * d1 - d2 * d2 - d3 * d3
    return IntervalClass(s2, classify(s2))


def rapidity_from_beta(beta: float) -> float:
    """Rapidity with tanh(zeta) = beta; |beta| must be strictly below 1."""
    if not math.isfinite(beta) or abs(beta) >= 1.0:
        raise ValueError(f"|beta| must be < 1, got {beta!r}")
    return math.atanh(beta)
