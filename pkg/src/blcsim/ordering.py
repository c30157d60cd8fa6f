"""Which detector reduces first: the invariant proper-time rule.

The order of the two reductions is set by comparing the proper times the
signals need from the source to each detector.  When those times are
separated by more than the detector response uncertainties the order is
deterministic; when the uncertainty intervals overlap, the winner is random.
Each decision itself happens at a sharp time inside its response window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kinematics import Detector, proper_time_between
from .minkowski import Event
from .rng import Stream


@dataclass(frozen=True)
class DecisionSchedule:
    """Resolved ordering for one trial.

    ``tbar_first``/``tbar_second`` are sharp decision times in each
    detector's own rest frame; ``overlap`` records whether randomness was
    involved in picking the winner.
    """

    first: str
    tbar_first: float
    tbar_second: float
    tau_a: float
    tau_b: float
    overlap: bool

    @property
    def second(self) -> str:
        return "A" if self.first == "B" else "B"


def proper_times(source: Event, a1: Event, b2: Event) -> tuple[float, float]:
    """Invariant proper times along the two signal branches (tau_a, tau_b);
    zero on a lightlike branch."""
    return proper_time_between(source, a1), proper_time_between(source, b2)


def decide_order(
    tau_a: float,
    tau_b: float,
    dtau_a: float,
    dtau_b: float,
    rng_seed: int,
    *,
    tbar_a: float = math.nan,
    tbar_b: float = math.nan,
) -> DecisionSchedule:
    """Pick the first decider from the proper times and their uncertainties.

    Disjoint uncertainty intervals make the smaller proper time win
    deterministically.  Overlapping intervals draw one time uniformly from
    each interval and compare, so P(A first) varies continuously from 1 to
    1/2 to 0 as the intervals slide across each other; an exact tie falls
    back to a fair coin.  The draw is a pure function of ``rng_seed``.
    """
    if dtau_a < 0.0 or dtau_b < 0.0:
        raise ValueError("uncertainties must be nonnegative")
    overlap = abs(tau_a - tau_b) <= dtau_a + dtau_b
    if not overlap:
        a_first = tau_a < tau_b
    else:
        stream = Stream(rng_seed)
        draw_a = tau_a + (2.0 * stream.next_double() - 1.0) * dtau_a
        draw_b = tau_b + (2.0 * stream.next_double() - 1.0) * dtau_b
        if draw_a == draw_b:
            a_first = stream.next_double() < 0.5
        else:
            a_first = draw_a < draw_b
    if a_first:
        return DecisionSchedule("A", tbar_a, tbar_b, tau_a, tau_b, overlap)
    return DecisionSchedule("B", tbar_b, tbar_a, tau_a, tau_b, overlap)


def sample_sharp_time(d: Detector, rng_seed: int) -> float:
    """Sharp decision time in the detector's rest frame.

    Nominal value is ``t_start + pre_decision``; the jitter spreads it
    uniformly over up to 80% of the distance to the nearer window edge
    (scaled by the detector's ``jitter``), so the result is always strictly
    interior to the response window.
    """
    nominal = d.t_start + d.pre_decision
    half_width = d.jitter * 0.8 * min(d.pre_decision, d.dt_window - d.pre_decision)
    if half_width == 0.0:
        return nominal
    stream = Stream(rng_seed)
    return nominal + (2.0 * stream.next_double() - 1.0) * half_width
