"""Collapse surfaces: arrivals, consistency, scans, the light-cone limit."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blcsim.collapse import (
    BACKWARD_LIGHT_CONE,
    INSTANTANEOUS,
    TILTED_PLANE,
    CollapsePolicy,
    CollapseSurface,
    arrival_on_worldline,
    blc_slope_limit,
    consistency_check,
    inconsistency_scan,
    max_consistent_arrival,
    reduction_point_on_branch,
)
from blcsim.errors import GeometryError
from blcsim.kinematics import SignalBranch, Worldline
from blcsim.minkowski import Boost, Event, boost, interval

INST = CollapsePolicy(INSTANTANEOUS)
BLC = CollapsePolicy(BACKWARD_LIGHT_CONE)

Z = 0.5
CH, SH, TH = math.cosh(Z), math.sinh(Z), math.tanh(Z)


def _linspace(a, b, n):
    return [a + k * (b - a) / (n - 1) for k in range(n)]


def _bisect_blc_time(apex: Event, w: Worldline, lo: float, hi: float) -> float:
    """Independent oracle: bisection on (t_apex - t) - |x_w(t) - x_apex|."""

    def g(t):
        return (apex.t - t) - abs(t * math.tanh(w.zeta) - apex.x1)

    assert g(lo) * g(hi) < 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(lo) * g(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


class TestPolicyValidation:
    def test_timelike_plane_rejected(self):
        # A slope at or past the light cone is not a spacelike surface.
        for slope in (1.0, -1.0, 1.2):
            with pytest.raises(ValueError):
                CollapsePolicy(TILTED_PLANE, slope)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            CollapsePolicy("forward_light_cone")

    def test_slope_ignored_outside_tilted(self):
        assert CollapsePolicy(INSTANTANEOUS).plane_slope == 0.0
        assert CollapsePolicy(TILTED_PLANE, 0.5).plane_slope == 0.5


class TestArrivalOnWorldline:
    def test_instantaneous_plane_reaches_moving_line(self):
        # Oracle: boost the lab crossing (t_apex on the worldline) to B's frame.
        s = CollapseSurface(Event(-1.0, 0.0), INST, decider_zeta=0.0)
        e = arrival_on_worldline(s, Worldline(Z))
        oracle = boost(Event(-1.0, -1.0 * TH), Boost(Z)).t
        assert boost(e, Boost(Z)).t == pytest.approx(oracle, abs=1e-12)
        assert boost(e, Boost(Z)).t == pytest.approx(-1.0 / CH, abs=1e-12)
        assert boost(e, Boost(Z)).t == pytest.approx(-0.887, abs=1e-3)

    def test_moving_plane_reaches_rest_line(self):
        apex = Event(-0.933 * CH, -0.933 * SH)  # on B's worldline at t' = -0.933
        s = CollapseSurface(apex, INST, decider_zeta=Z)
        e = arrival_on_worldline(s, Worldline(0.0))
        assert e.t == pytest.approx(-0.933 / CH, abs=1e-12)
        assert e.t == pytest.approx(-0.827, abs=1e-3)

    def test_backward_cone_against_bisection(self):
        s = CollapseSurface(Event(-1.0, 0.0), BLC)
        e = arrival_on_worldline(s, Worldline(Z))
        oracle = _bisect_blc_time(Event(-1.0, 0.0), Worldline(Z), -10.0, -1.0)
        assert e.t == pytest.approx(oracle, abs=1e-9)
        assert e.t == pytest.approx(-1.0 / (1.0 - TH), abs=1e-12)
        assert e.t == pytest.approx(-1.859, abs=1e-3)

    def test_blc_arrival_is_lightlike(self):
        for zeta in (-3.0, -0.7, 0.4, 2.5):
            for t0 in (-2.0, -0.5, 1.0):
                s = CollapseSurface(Event(t0, 0.0), BLC)
                e = arrival_on_worldline(s, Worldline(zeta))
                assert abs(interval(s.apex, e).s_squared) <= 1e-9

    def test_spacelike_plane_always_crosses_timelike_lines(self):
        # |slope| < 1 and |beta| < 1 imply a crossing for every pairing.
        for slope in (-0.99, 0.0, 0.97):
            for zeta in (-2.5, 0.4, 3.0):
                s = CollapseSurface(Event(-1.0, 0.3), CollapsePolicy(TILTED_PLANE, slope) if slope else INST, 0.0)
                arrival_on_worldline(s, Worldline(zeta))

    def test_apex_on_worldline_is_degenerate(self):
        s = CollapseSurface(Event(-1.0, -1.0 * TH), BLC)
        with pytest.raises(GeometryError):
            arrival_on_worldline(s, Worldline(Z))


class TestConsistencyCheck:
    def test_approaching_instantaneous_is_inconsistent(self):
        # Oracle arithmetic: delta_a = -0.933/cosh + 1 = +0.173,
        # delta_b = -0.933 + 1/cosh = -0.046.
        decision_b = Event(-0.933 * CH, -0.933 * SH)
        r = consistency_check(Event(-1.0, 0.0), decision_b, INST, Z)
        assert not r.consistent
        assert r.delta_a == pytest.approx(0.173, abs=1e-3)
        assert r.delta_b == pytest.approx(-0.046, abs=1e-3)

    def test_receding_instantaneous_is_consistent(self):
        decision_b = Event(0.933 * CH, 0.933 * SH)
        r = consistency_check(Event(1.0, 0.0), decision_b, INST, Z)
        assert r.consistent

    def test_approaching_blc_is_consistent(self):
        decision_b = Event(-0.933 * CH, -0.933 * SH)
        r = consistency_check(Event(-1.0, 0.0), decision_b, BLC, Z)
        assert r.consistent

    @given(
        st.floats(min_value=-5.0, max_value=5.0).filter(lambda z: abs(z) > 1e-3),
        st.floats(min_value=-3.0, max_value=3.0).filter(lambda t: abs(t) > 1e-6),
        st.floats(min_value=-3.0, max_value=3.0).filter(lambda t: abs(t) > 1e-6),
    )
    @settings(max_examples=300)
    def test_blc_always_consistent(self, zeta, t_a, t_b_rest):
        decision_b = Event(t_b_rest * math.cosh(zeta), t_b_rest * math.sinh(zeta))
        r = consistency_check(Event(t_a, 0.0), decision_b, BLC, zeta)
        assert r.consistent


class TestInconsistencyScan:
    def test_instantaneous_negative_half(self):
        rep = inconsistency_scan(INST, _linspace(0.1, 3.0, 10), _linspace(-2.0, -0.1, 8))
        assert not rep.all_consistent
        assert all(not c.consistent for c in rep.cells)

    def test_instantaneous_positive_half(self):
        # Oracle: direct evaluation says every receding-time cell passes.
        rep = inconsistency_scan(INST, _linspace(0.1, 3.0, 10), _linspace(0.1, 2.0, 8))
        assert rep.all_consistent

    def test_blc_full_grid(self):
        # 40 points over [-2, 2] skip the degenerate t = 0 (worldlines cross there).
        rep = inconsistency_scan(BLC, _linspace(0.1, 3.0, 10), _linspace(-2.0, 2.0, 40))
        assert rep.all_consistent

    def test_blc_negative_rapidities(self):
        rep = inconsistency_scan(BLC, _linspace(-3.0, -0.1, 10), _linspace(-2.0, 2.0, 40))
        assert rep.all_consistent

    def test_instantaneous_verdict_is_rapidity_sign_independent(self):
        times = _linspace(-2.0, 2.0, 40)
        pos = inconsistency_scan(INST, _linspace(0.1, 3.0, 10), times)
        neg = inconsistency_scan(INST, _linspace(-0.1, -3.0, 10), times)
        assert [c.consistent for c in pos.cells] == [c.consistent for c in neg.cells]

    def test_tilted_plane_fails_within_bounded_rapidity(self):
        for slope in (0.3, 0.6, 0.9, 0.99):
            bound = math.atanh(slope) + 2.0
            rep = inconsistency_scan(
                CollapsePolicy(TILTED_PLANE, slope),
                _linspace(0.05, bound, 40),
                _linspace(-2.0, 2.0, 9),
            )
            assert rep.first_violation_zeta is not None
            assert rep.first_violation_zeta <= bound

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            inconsistency_scan(INST, [], [1.0])


class TestMaxConsistentArrival:
    def test_reference_values(self):
        e = max_consistent_arrival(Event(-1.0, 0.0), 0.5)
        assert e.t == pytest.approx(-1.1276, abs=1e-3)
        assert e.x1 == pytest.approx(-0.5211, abs=1e-3)

    def test_zero_rapidity_coincides(self):
        e = max_consistent_arrival(Event(-1.0, 0.0), 0.0)
        assert (e.t, e.x1) == (-1.0, 0.0)

    def test_segment_is_spacelike_with_closed_form(self):
        for zeta in (-2.0, -0.5, 0.3, 1.7):
            for t0 in (-2.0, -1.0, 0.7):
                apex = Event(t0, 0.0)
                e = max_consistent_arrival(apex, zeta)
                s2 = interval(apex, e).s_squared
                expect = 2.0 * (1.0 - math.cosh(zeta)) * t0 * t0
                assert math.isclose(s2, expect, rel_tol=1e-9, abs_tol=1e-12)
                if zeta != 0.0:
                    assert s2 < 0.0

    def test_apex_off_worldline_rejected(self):
        with pytest.raises(ValueError):
            max_consistent_arrival(Event(-1.0, 0.5), 0.5)


class TestBlcSlopeLimit:
    def test_values(self):
        vals = blc_slope_limit([0.5, 10.0])
        assert vals[0] == pytest.approx(0.2449, abs=1e-4)
        assert vals[1] == pytest.approx(0.99991, abs=1e-5)

    def test_monotone_bounded_tanh_identity(self):
        zetas = _linspace(0.05, 12.0, 120)
        vals = blc_slope_limit(zetas)
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert all(v < 1.0 for v in vals)
        for z, v in zip(zetas, vals):
            assert v == pytest.approx(math.tanh(z / 2.0), abs=1e-12)

    def test_zero_rapidity_rejected(self):
        with pytest.raises(ValueError):
            blc_slope_limit([0.0, 1.0])


class TestReductionPoint:
    def _figure_branch(self):
        return SignalBranch(Event(-1.809, -0.122), Event(-1.0, 0.0), "S->A1")

    def test_blc_crossing_against_bisection(self):
        apex = Event(-1.052, -0.486)
        s = CollapseSurface(apex, BLC, decider_zeta=Z)
        branch = self._figure_branch()
        e = reduction_point_on_branch(s, branch)

        def g(sc):
            p = branch.point(sc)
            return (apex.t - p.t) - math.hypot(p.x1 - apex.x1, p.x2 - apex.x2)

        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g(mid) > 0:
                lo = mid
            else:
                hi = mid
        oracle = branch.point(0.5 * (lo + hi))
        assert e.t == pytest.approx(oracle.t, abs=1e-9)
        assert e.x1 == pytest.approx(oracle.x1, abs=1e-9)
        assert e.t == pytest.approx(-1.467, abs=5e-3)
        assert e.x1 == pytest.approx(-0.071, abs=5e-3)
        # Strictly between emission and arrival.
        assert branch.source.t < e.t < branch.detection.t

    def test_instantaneous_plane_crossing(self):
        s = CollapseSurface(Event(0.0, 0.0), INST, 0.0)
        branch = SignalBranch(Event(-1.0, 0.5), Event(1.0, 0.5), "s")
        e = reduction_point_on_branch(s, branch)
        assert e.t == pytest.approx(0.0, abs=1e-12)
        assert e.x1 == pytest.approx(0.5, abs=1e-12)

    def test_apex_at_detection_is_degenerate(self):
        branch = self._figure_branch()
        s = CollapseSurface(branch.detection, BLC)
        with pytest.raises(GeometryError):
            reduction_point_on_branch(s, branch)

    def test_non_straddling_plane_rejected(self):
        s = CollapseSurface(Event(5.0, 0.0), INST, 0.0)
        with pytest.raises(GeometryError):
            reduction_point_on_branch(s, self._figure_branch())

    def test_lightlike_branch_crossing(self):
        # Null segment: the quadratic degenerates to a linear solve.
        branch = SignalBranch(Event(-2.0, 0.0), Event(0.0, 2.0), "null")
        s = CollapseSurface(Event(0.2, 1.5), BLC)
        e = reduction_point_on_branch(s, branch)
        assert e.t == pytest.approx(-0.15, abs=1e-9)
        assert e.x1 == pytest.approx(1.85, abs=1e-9)
        assert abs((s.apex.t - e.t) - abs(e.x1 - s.apex.x1)) < 1e-9
