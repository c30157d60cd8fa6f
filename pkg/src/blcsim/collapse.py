"""Collapse hypersurfaces and the frame-consistency machinery.

A reduction decision at an apex event propagates over a hypersurface chosen
by policy: the decider's instantaneous plane of simultaneity, a tilted
spacelike plane (slope fixed in the decider's rest frame), or the backward
light cone (blc) of the apex.  The operations here compute where such a
surface meets other worldlines and signal branches, and whether a pair of
spacelike decisions admits a frame-independent ordering story.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import GeometryError
from .kinematics import SignalBranch, Worldline, position_at, relative_to
from .minkowski import Boost, Event, boost, inverse_boost

INSTANTANEOUS = "instantaneous"
TILTED_PLANE = "tilted_plane"
BACKWARD_LIGHT_CONE = "backward_light_cone"

_PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class CollapsePolicy:
    """Which hypersurface carries a reduction decision.

    ``slope`` is the plane's dt/dx1 in the decider's rest frame and must stay
    strictly subluminal (|slope| < 1); instantaneous is the slope-0 plane.
    """

    kind: str = BACKWARD_LIGHT_CONE
    slope: float = 0.0

    def __post_init__(self):
        if self.kind not in (INSTANTANEOUS, TILTED_PLANE, BACKWARD_LIGHT_CONE):
            raise ValueError(f"unknown collapse policy kind {self.kind!r}")
        if self.kind == TILTED_PLANE and not abs(self.slope) < 1.0:
            raise ValueError(f"tilted plane must be spacelike: |slope| < 1, got {self.slope}")

    @property
    def plane_slope(self) -> float:
        return self.slope if self.kind == TILTED_PLANE else 0.0


@dataclass(frozen=True)
class CollapseSurface:
    """A policy surface anchored at the decision event of one detector."""

    apex: Event
    policy: CollapsePolicy = field(default_factory=CollapsePolicy)
    decider_zeta: float = 0.0


def _plane_crossing_time_rest(s: CollapseSurface, w_rel: Worldline, apex_rest: Event) -> float:
    """Decider-frame time at which the plane through the apex meets ``w_rel``
    (both already expressed in the decider's rest frame)."""
    slope = s.policy.plane_slope
    beta = w_rel.beta
    denom = 1.0 - slope * beta
    if abs(denom) < _PARALLEL_TOL:
        raise GeometryError("plane is parallel to the worldline; no crossing")
    return (apex_rest.t - slope * apex_rest.x1) / denom


def _blc_crossing_time(apex: Event, w: Worldline) -> float:
    """Lab time at which the backward light cone of ``apex`` meets ``w``.

    Roots of (t_a - t)^2 = (beta t - x_a)^2 + d_perp^2; the smaller root lies
    on the backward sheet, the larger on the forward one.
    """
    beta = w.beta
    d2 = w.offsets[0] - apex.x2
    d3 = w.offsets[1] - apex.x3
    dperp2 = d2 * d2 + d3 * d3
    a = 1.0 - beta * beta
    b = -2.0 * apex.t + 2.0 * beta * apex.x1
    c = apex.t * apex.t - apex.x1 * apex.x1 - dperp2
    disc = b * b - 4.0 * a * c
    if disc <= _PARALLEL_TOL * _PARALLEL_TOL:
        raise GeometryError("apex lies on the worldline; light-cone crossing degenerate")
    sq = math.sqrt(disc)
    t = (-b - sq) / (2.0 * a)
    if not t < apex.t:
        raise GeometryError("no backward light-cone crossing below the apex")
    return t


def arrival_on_worldline(s: CollapseSurface, w: Worldline) -> Event:
    """Lab-frame event at which the collapse surface reaches ``w``.

    For plane policies the crossing is computed in the decider's rest frame
    and boosted back; for the backward light cone it is the past-sheet
    crossing, which is lightlike-separated from the apex by construction.
    """
    if s.policy.kind == BACKWARD_LIGHT_CONE:
        return position_at(w, _blc_crossing_time(s.apex, w))
    frame = Boost(s.decider_zeta)
    apex_rest = boost(s.apex, frame)
    w_rel = relative_to(w, s.decider_zeta)
    t_rest = _plane_crossing_time_rest(s, w_rel, apex_rest)
    return inverse_boost(position_at(w_rel, t_rest), frame)


@dataclass(frozen=True)
class ConsistencyCheck:
    """Outcome of the two-frame ordering test for one pair of decisions.

    ``delta_a`` is (arrival at A of B's surface) - (A's decision time), in
    A's frame; ``delta_b`` is (B's decision time) - (arrival at B of A's
    surface), in B's frame.  The pair is inconsistent when both detectors
    decide before the other's surface reaches them (delta_a >= 0 together
    with delta_b <= 0): each then measures the uncollapsed state, which
    contradicts the conditional statistics, and no ordering story exists.
    Boundary equalities count as inconsistent.
    """

    consistent: bool
    delta_a: float
    delta_b: float
    arrival_at_a: Event
    arrival_at_b: Event


def consistency_check(
    decision_a: Event,
    decision_b: Event,
    policy: CollapsePolicy,
    zeta: float,
) -> ConsistencyCheck:
    """Test whether decisions by A (at rest) and B (rapidity ``zeta``) admit
    a consistent mutual ordering under the given collapse policy.

    Both decision events are given in A's frame; ``decision_b`` must lie on
    B's worldline.
    """
    w_a = Worldline(0.0)
    w_b = Worldline(zeta)
    surface_a = CollapseSurface(decision_a, policy, decider_zeta=0.0)
    surface_b = CollapseSurface(decision_b, policy, decider_zeta=zeta)

    arrival_at_b = arrival_on_worldline(surface_a, w_b)
    arrival_at_a = arrival_on_worldline(surface_b, w_a)

    frame_b = Boost(zeta)
    delta_a = arrival_at_a.t - decision_a.t
    delta_b = boost(decision_b, frame_b).t - boost(arrival_at_b, frame_b).t
    inconsistent = delta_a >= 0.0 and delta_b <= 0.0
    return ConsistencyCheck(not inconsistent, delta_a, delta_b, arrival_at_a, arrival_at_b)


def max_consistent_arrival(apex: Event, zeta: float) -> Event:
    """Latest event on the moving worldline that the rest detector's surface
    may reach without creating an ordering contradiction.

    The bound point sits at lab time t_apex*cosh(zeta) (rest-frame time equal
    to the apex time), at x1 = t_apex*sinh(zeta); the segment from the apex
    to it is spacelike for every zeta != 0.
    """
    if abs(apex.x1) > 1e-9:
        raise ValueError("apex must lie on the rest detector's worldline (x1 = 0)")
    return Event(apex.t * math.cosh(zeta), apex.t * math.sinh(zeta), apex.x2, apex.x3)


def _arrival_bounds_hold(policy: CollapsePolicy, zeta: float, t_a: float) -> bool:
    """Check both arrival bounds for the marginally paired decisions.

    A's surface must cut B's worldline strictly before the bound point of
    :func:`max_consistent_arrival`, and symmetrically for B's surface against
    A's worldline (evaluated in B's frame, where the roles mirror exactly).
    A surface that misses the worldline altogether also fails.
    """
    ch = math.cosh(zeta)
    w_b = Worldline(zeta)
    try:
        arrival_b = arrival_on_worldline(CollapseSurface(Event(t_a, 0.0), policy, 0.0), w_b)
    except GeometryError:
        return False
    if not arrival_b.t < t_a * ch:
        return False

    # B decides at rest-frame time t_a (the marginal pairing); in B's own
    # frame A is the moving line, so the mirrored bound applies verbatim.
    decision_b = Event(t_a * ch, t_a * math.sinh(zeta))
    try:
        arrival_a = arrival_on_worldline(
            CollapseSurface(decision_b, policy, decider_zeta=zeta), Worldline(0.0)
        )
    except GeometryError:
        return False
    return boost(arrival_a, Boost(zeta)).t < t_a * ch


@dataclass(frozen=True)
class ScanCell:
    zeta: float
    t_a: float
    consistent: bool
    delta_a: float
    delta_b: float


@dataclass(frozen=True)
class ScanReport:
    """Consistency verdicts over a (zeta, decision-time) grid for one policy.

    Each cell pairs A's decision at (t, 0) with B's decision at the marginal
    arrival-bound point on B's worldline and requires both the ordering test
    of :func:`consistency_check` and the strict arrival bounds to hold.
    """

    policy: CollapsePolicy
    zetas: tuple[float, ...]
    times: tuple[float, ...]
    cells: tuple[ScanCell, ...]

    @property
    def inconsistent_cells(self) -> tuple[ScanCell, ...]:
        return tuple(c for c in self.cells if not c.consistent)

    @property
    def all_consistent(self) -> bool:
        return all(c.consistent for c in self.cells)

    @property
    def first_violation_zeta(self) -> float | None:
        bad = self.inconsistent_cells
        return min(c.zeta for c in bad) if bad else None


def inconsistency_scan(
    policy: CollapsePolicy,
    zetas: list[float] | tuple[float, ...],
    times: list[float] | tuple[float, ...],
) -> ScanReport:
    """Scan the paired-decision arrangement over rapidity and decision-time
    grids, recording where the policy fails."""
    if not zetas or not times:
        raise ValueError("scan grids must be nonempty")
    cells = []
    for z in zetas:
        for t_a in times:
            decision_a = Event(t_a, 0.0)
            decision_b = Event(t_a * math.cosh(z), t_a * math.sinh(z))
            try:
                check = consistency_check(decision_a, decision_b, policy, z)
                ok = check.consistent and _arrival_bounds_hold(policy, z, t_a)
                cells.append(ScanCell(z, t_a, ok, check.delta_a, check.delta_b))
            except GeometryError:
                cells.append(ScanCell(z, t_a, False, math.nan, math.nan))
    return ScanReport(policy, tuple(zetas), tuple(times), tuple(cells))


def blc_slope_limit(zetas: list[float] | tuple[float, ...]) -> list[float]:
    """(cosh(zeta) - 1)/sinh(zeta) per rapidity: the slope a plane would need
    to keep up with the arrival bound.  Strictly increasing toward 1, which
    is why only the light cone works for every rapidity."""
    out = []
    for z in zetas:
        if z <= 0.0:
            raise ValueError(f"rapidity grid must be positive, got {z}")
        out.append((math.cosh(z) - 1.0) / math.sinh(z))
    return out


def _surface_side(s: CollapseSurface, e: Event) -> float:
    """Signed side of an event relative to the surface.

    Positive on the past side swept by the collapse (inside the blc, or below
    the plane in the decider frame), negative outside, zero on the surface.
    """
    if s.policy.kind == BACKWARD_LIGHT_CONE:
        dt = s.apex.t - e.t
        d1 = e.x1 - s.apex.x1
        d2 = e.x2 - s.apex.x2
        d3 = e.x3 - s.apex.x3
        return dt - math.sqrt(d1 * d1 + d2 * d2 + d3 * d3)
    frame = Boost(s.decider_zeta)
    apex_rest = boost(s.apex, frame)
    e_rest = boost(e, frame)
    slope = s.policy.plane_slope
    return (apex_rest.t + slope * (e_rest.x1 - apex_rest.x1)) - e_rest.t


def reduction_point_on_branch(s: CollapseSurface, branch: SignalBranch) -> Event:
    """Event at which the collapse surface cuts a signal branch.

    The emission must lie on the collapse side of the surface and the arrival
    beyond it (strictly); the crossing is then unique on the segment.  Solved
    in closed form (the side function is quadratic in the segment parameter
    for the light cone and linear for planes), with a bisection fallback for
    degenerate coefficients.
    """
    g0 = _surface_side(s, branch.source)
    g1 = _surface_side(s, branch.detection)
    if not (g0 > 0.0 and g1 < 0.0):
        raise GeometryError(
            f"branch {branch.label} does not straddle the surface "
            f"(sides {g0:.3g}, {g1:.3g})"
        )

    if s.policy.kind != BACKWARD_LIGHT_CONE:
        # Linear in the parameter: interpolate the side function exactly.
        sc = g0 / (g0 - g1)
        return branch.point(sc)

    a0, a1 = branch.source, branch.detection
    dt = a1.t - a0.t
    d1 = a1.x1 - a0.x1
    d2 = a1.x2 - a0.x2
    d3 = a1.x3 - a0.x3
    # (t_apex - t(s))^2 - |x(s) - x_apex|^2 = 0, quadratic a s^2 + b s + c.
    et = s.apex.t - a0.t
    e1 = a0.x1 - s.apex.x1
    e2 = a0.x2 - s.apex.x2
    e3 = a0.x3 - s.apex.x3
    a = dt * dt - d1 * d1 - d2 * d2 - d3 * d3  # segment's own s^2
    b = -2.0 * (et * dt + e1 * d1 + e2 * d2 + e3 * d3)
    c = et * et - e1 * e1 - e2 * e2 - e3 * e3
    roots = []
    if abs(a) < 1e-12:
        if abs(b) > 1e-15:
            roots.append(-c / b)
    else:
        disc = b * b - 4.0 * a * c
        if disc >= 0.0:
            sq = math.sqrt(disc)
            roots.extend([(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)])
    best = None
    for r in roots:
        if -1e-12 <= r <= 1.0 + 1e-12 and branch.point(r).t <= s.apex.t + 1e-12:
            if best is None or abs(_surface_side(s, branch.point(r))) < abs(
                _surface_side(s, branch.point(best))
            ):
                best = r
    if best is None:
        best = _bisect_crossing(s, branch)
    return branch.point(min(max(best, 0.0), 1.0))


def _bisect_crossing(s: CollapseSurface, branch: SignalBranch, tol: float = 1e-12) -> float:
    lo, hi = 0.0, 1.0  # side(lo) > 0 > side(hi), checked by the caller
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _surface_side(s, branch.point(mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
