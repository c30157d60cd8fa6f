"""State space, Born rule, collapse, timeline epochs, LHV constraints, CHSH."""

import math

import numpy as np
import pytest

from blcsim.errors import ImpossibleOutcomeError, StateError, TimelineError
from blcsim.kinematics import Detector
from blcsim.minkowski import Event
from blcsim.quantum import (
    OPTIMAL_CHSH_AXES,
    Outcome,
    ProbabilityTable,
    StateVector,
    born_probabilities,
    build_timeline,
    chsh_analytic,
    chsh_value,
    collapse_state,
    conditional_probabilities,
    factor_product,
    intermediate_state,
    lhv_constraints_check,
    same_ray,
    schmidt_values,
    singlet,
    spin_eigenvector,
    spin_projector,
)

Z_AXIS = (0.0, 0.0, 1.0)
X_AXIS = (1.0, 0.0, 0.0)


def det(label, *axes, weights=None):
    axes = axes or (Z_AXIS,)
    weights = weights or tuple(1.0 / len(axes) for _ in axes)
    return Detector(id=label, axes=tuple(axes), axis_weights=weights)


def product_state(b_vec, a_vec):
    amps = np.empty(4, dtype=complex)
    idx = ((2, 1), (0, 3))
    for b in range(2):
        for a in range(2):
            amps[idx[b][a]] = b_vec[b] * a_vec[a]
    return StateVector(amps)


UP = np.array([1.0, 0.0], dtype=complex)
DOWN = np.array([0.0, 1.0], dtype=complex)


class TestSinglet:
    def test_amplitudes_and_norm(self):
        psi = singlet()
        s = 1.0 / math.sqrt(2.0)
        assert np.allclose(psi.amplitudes, [s, -s, 0.0, 0.0])
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_to_plus_plus(self):
        assert singlet().overlap(product_state(UP, UP)) == pytest.approx(0.0, abs=1e-12)

    def test_rotational_invariance(self):
        # Oracle: explicit 2x2 rotation applied to both factors.
        theta, axis = 1.1, (0.0, 1.0, 0.0)
        nx, ny, nz = axis
        sig = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]])
        u = np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * sig
        m = singlet().matrix()
        rotated = u @ m @ u.T  # (U (x) U) |psi> in matrix form
        idx = ((2, 1), (0, 3))
        amps = np.empty(4, dtype=complex)
        for b in range(2):
            for a in range(2):
                amps[idx[b][a]] = rotated[b, a]
        assert same_ray(amps, singlet().amplitudes, tol=1e-9)
        assert np.allclose(np.abs(amps), np.abs(singlet().amplitudes), atol=1e-9)


class TestBornProbabilities:
    def test_singlet_single_axis(self):
        # Oracle: explicit 4x4 projector expectation.
        psi = singlet()
        proj = spin_projector(Z_AXIS, +1)
        full = np.zeros((4, 4), dtype=complex)
        idx = ((2, 1), (0, 3))
        for b in range(2):
            for a in range(2):
                for ap in range(2):
                    full[idx[b][ap], idx[b][a]] += proj[ap, a]
        expect = float(np.real(np.vdot(psi.amplitudes, full @ psi.amplitudes)))
        table = born_probabilities(psi, det("A"))
        assert table.get("A", 1, +1) == pytest.approx(expect, abs=1e-12)
        assert table.get("A", 1, +1) == pytest.approx(0.5, abs=1e-12)
        assert table.get("A", 1, -1) == pytest.approx(0.5, abs=1e-12)

    def test_eigenstate_is_certain(self):
        table = born_probabilities(product_state(UP, UP), det("A"))
        assert table.get("A", 1, +1) == pytest.approx(1.0, abs=1e-12)
        assert table.get("A", 1, -1) == pytest.approx(0.0, abs=1e-12)

    def test_two_axes_uniform_weights(self):
        # Oracle: enumeration, each alternative is w_i * 1/2 = 1/4.
        table = born_probabilities(singlet(), det("B", Z_AXIS, X_AXIS))
        for i in (1, 2):
            for s in (+1, -1):
                assert table.get("B", i, s) == pytest.approx(0.25, abs=1e-12)

    def test_normalization_and_range(self):
        table = born_probabilities(singlet(), det("A", Z_AXIS, X_AXIS, weights=(0.3, 0.7)))
        total = sum(table.entries.values())
        assert total == pytest.approx(1.0, abs=1e-9)
        assert all(0.0 <= p <= 1.0 for p in table.entries.values())


class TestCollapse:
    def test_b_plus_gives_certain_a_minus(self):
        out = collapse_state(singlet(), Outcome("B", 1, +1, Z_AXIS))
        assert same_ray(out.amplitudes, product_state(UP, DOWN).amplitudes)

    def test_b_minus_gives_certain_a_plus(self):
        out = collapse_state(singlet(), Outcome("B", 1, -1, Z_AXIS))
        assert same_ray(out.amplitudes, product_state(DOWN, UP).amplitudes)

    def test_impossible_outcome(self):
        with pytest.raises(ImpossibleOutcomeError):
            collapse_state(product_state(UP, UP), Outcome("B", 1, -1, Z_AXIS))

    def test_collapsed_states_are_products(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            v = rng.normal(size=3)
            axis = tuple(v / np.linalg.norm(v))
            for detector in ("A", "B"):
                for sign in (+1, -1):
                    out = collapse_state(singlet(), Outcome(detector, 1, sign, axis))
                    s = schmidt_values(out)
                    assert np.linalg.norm(out.amplitudes) == pytest.approx(1.0, abs=1e-9)
                    assert s[1] <= 1e-9


class TestConditional:
    def test_half_angle_law(self):
        # Oracle: explicit projector arithmetic p = |<a+|b->|^2 = sin^2(theta/2).
        after = collapse_state(singlet(), Outcome("B", 1, +1, Z_AXIS))
        for theta in (0.0, 0.3, math.pi / 2, 2.2, math.pi):
            axis = (math.sin(theta), 0.0, math.cos(theta))
            a_plus = spin_eigenvector(axis, +1)
            b_minus = spin_eigenvector(Z_AXIS, -1)
            oracle = abs(np.vdot(a_plus, b_minus)) ** 2
            got = conditional_probabilities(after, det("A", axis)).get("A", 1, +1)
            assert got == pytest.approx(oracle, abs=1e-12)
            assert got == pytest.approx(math.sin(theta / 2.0) ** 2, abs=1e-12)

    def test_same_axis_never_same_sign(self):
        after = collapse_state(singlet(), Outcome("B", 1, +1, Z_AXIS))
        assert conditional_probabilities(after, det("A")).get("A", 1, +1) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_order_independence_of_joint_statistics(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            axes = []
            for _ in range(2):
                v = rng.normal(size=3)
                axes.append(tuple(v / np.linalg.norm(v)))
            axis_a, axis_b = axes
            for sa in (+1, -1):
                for sb in (+1, -1):
                    oa, ob = Outcome("A", 1, sa, axis_a), Outcome("B", 1, sb, axis_b)
                    # B first
                    p_b = born_probabilities(singlet(), det("B", axis_b)).get("B", 1, sb)
                    p_ab = conditional_probabilities(
                        collapse_state(singlet(), ob), det("A", axis_a)
                    ).get("A", 1, sa)
                    # A first
                    p_a = born_probabilities(singlet(), det("A", axis_a)).get("A", 1, sa)
                    p_ba = conditional_probabilities(
                        collapse_state(singlet(), oa), det("B", axis_b)
                    ).get("B", 1, sb)
                    assert p_b * p_ab == pytest.approx(p_a * p_ba, abs=1e-12)


class TestIntermediateState:
    @staticmethod
    def _contract_oracle(psi, a_vec):
        # Independent oracle: explicit component sums over the A factor.
        idx = ((2, 1), (0, 3))
        out = np.zeros(2, dtype=complex)
        for b in range(2):
            for a in range(2):
                out[b] += psi.amplitudes[idx[b][a]] * np.conj(a_vec[a])
        return out / np.linalg.norm(out)

    def test_z_axis_contractions(self):
        # <a-| singlet  ~ |+>_B and <a+| singlet ~ |->_B (component sums).
        got_minus = intermediate_state(singlet(), Outcome("A", 1, -1, Z_AXIS))
        oracle = self._contract_oracle(singlet(), DOWN)
        assert same_ray(got_minus, oracle)
        assert same_ray(got_minus, UP)
        got_plus = intermediate_state(singlet(), Outcome("A", 1, +1, Z_AXIS))
        assert same_ray(got_plus, DOWN)
        assert np.linalg.norm(got_plus) == pytest.approx(1.0, abs=1e-12)

    def test_x_axis_contraction_gives_equal_superposition(self):
        # Contracting with the +1 eigenvector along x yields the
        # (|->_B - |+>_B)/sqrt(2) superposition ray.
        got = intermediate_state(singlet(), Outcome("A", 1, +1, X_AXIS))
        display = np.array([-1.0, 1.0], dtype=complex) / math.sqrt(2.0)
        oracle = self._contract_oracle(singlet(), spin_eigenvector(X_AXIS, +1))
        assert same_ray(got, oracle)
        assert same_ray(got, display)

    def test_product_state_returns_own_factor(self):
        psi = product_state(UP, DOWN)
        got = intermediate_state(psi, Outcome("A", 1, -1, Z_AXIS))
        assert same_ray(got, UP)

    def test_zero_contraction_is_an_error(self):
        with pytest.raises(ImpossibleOutcomeError):
            intermediate_state(product_state(UP, UP), Outcome("A", 1, -1, Z_AXIS))


class TestTimeline:
    def _events(self):
        return (
            Event(-1.467, -0.070),
            Event(-1.052, -0.486),
            Event(-1.0, 0.0),
        )

    def test_four_epoch_structure(self):
        crossing, b2, a1 = self._events()
        k = Outcome("B", 1, +1, Z_AXIS)
        l = Outcome("A", 1, -1, Z_AXIS)
        tl = build_timeline(crossing, b2, a1, k, l)
        assert tl.boundaries() == pytest.approx((-1.467, -1.052, -1.0))
        names = [e.name for e in tl.epochs]
        assert names == ["entangled", "crossed", "decided-first", "decided-both"]
        # Epoch contents against the collapse oracles.
        assert same_ray(tl.epochs[0].amplitudes(), singlet().amplitudes)
        after_first = collapse_state(singlet(), k)
        y3, x3 = factor_product(after_first)
        assert same_ray(tl.epochs[2].y_factor, y3)
        assert same_ray(tl.epochs[2].x_factor, x3)
        assert same_ray(tl.epochs[1].x_factor, x3)  # x is sharp already
        assert same_ray(tl.epochs[1].y_factor, intermediate_state(singlet(), Outcome("A", 1, -1, Z_AXIS)))
        after_second = collapse_state(after_first, l)
        y4, x4 = factor_product(after_second)
        assert same_ray(tl.epochs[3].y_factor, y4)
        assert same_ray(tl.epochs[3].x_factor, x4)

    def test_epoch3_equals_collapsed_product_exactly(self):
        crossing, b2, a1 = self._events()
        k = Outcome("B", 1, +1, Z_AXIS)
        tl = build_timeline(crossing, b2, a1, k, Outcome("A", 1, -1, Z_AXIS))
        collapsed = collapse_state(singlet(), k).amplitudes
        got = tl.epochs[2].amplitudes()
        phase = np.vdot(got, collapsed)
        phase /= abs(phase)
        assert np.allclose(got * phase, collapsed, atol=1e-12)

    def test_query_before_crossing_is_entangled(self):
        crossing, b2, a1 = self._events()
        tl = build_timeline(
            crossing, b2, a1, Outcome("B", 1, +1, Z_AXIS), Outcome("A", 1, -1, Z_AXIS)
        )
        assert same_ray(tl.state_at(-2.0), singlet().amplitudes)
        assert tl.epoch_at(-1.2).name == "crossed"
        assert tl.epoch_at(-1.01).name == "decided-first"
        assert tl.epoch_at(0.0).name == "decided-both"

    def test_frame_reordering_without_content_change(self):
        crossing, b2, a1 = self._events()
        tl = build_timeline(
            crossing, b2, a1, Outcome("B", 1, +1, Z_AXIS), Outcome("A", 1, -1, Z_AXIS)
        )
        t_sb, t_b2, t_a1 = tl.boundaries_in_frame(0.5)
        assert t_a1 < t_b2  # the middle boundaries swap in B's frame
        assert t_sb < t_a1
        # contents are attached to the crossings, not to frame time
        assert [e.name for e in tl.epochs] == [
            "entangled",
            "crossed",
            "decided-first",
            "decided-both",
        ]

    def test_misordered_boundaries_rejected(self):
        crossing, b2, a1 = self._events()
        with pytest.raises(TimelineError):
            build_timeline(
                b2, crossing, a1, Outcome("B", 1, +1, Z_AXIS), Outcome("A", 1, -1, Z_AXIS)
            )


class TestLhvConstraints:
    @staticmethod
    def _table(det_label, probs):
        entries = {
            Outcome(det_label, i, s, Z_AXIS): p for (i, s), p in probs.items()
        }
        return ProbabilityTable(entries)

    def test_deterministic_assignment_passes(self):
        ta = self._table("A", {(1, +1): 1.0, (1, -1): 0.0})
        tb = self._table("B", {(1, +1): 0.0, (1, -1): 1.0})
        assert lhv_constraints_check(ta, tb).ok

    def test_quantum_tables_violate_products(self):
        # Oracle: 1/(2n) per entry, so every product is 1/(2n)^2 > 0.
        d_a = det("A", Z_AXIS, X_AXIS)
        d_b = det("B", Z_AXIS, X_AXIS)
        report = lhv_constraints_check(
            born_probabilities(singlet(), d_a), born_probabilities(singlet(), d_b)
        )
        product_violations = [v for v in report.violations if v.kind == "product_nonzero"]
        assert len(product_violations) == 4  # two axes x two detectors
        assert all(abs(v.values[0] * v.values[1] - 0.0625) < 1e-12 for v in product_violations)

    def test_broken_biconditional_flagged(self):
        ta = self._table("A", {(1, +1): 0.0, (1, -1): 1.0})
        tb = self._table("B", {(1, +1): 0.5, (1, -1): 0.5})
        report = lhv_constraints_check(ta, tb)
        kinds = {v.kind for v in report.violations}
        assert "biconditional" in kinds


class TestChsh:
    def test_analytic_optimal(self):
        # Oracle: exact enumeration of the four correlators E = -a.b.
        (a, a2), (b, b2) = OPTIMAL_CHSH_AXES
        dot = lambda u, v: sum(x * y for x, y in zip(u, v))
        oracle = -dot(a, b) + dot(a, b2) - dot(a2, b) - dot(a2, b2)
        assert chsh_analytic(*OPTIMAL_CHSH_AXES) == pytest.approx(oracle, abs=1e-12)
        assert chsh_analytic(*OPTIMAL_CHSH_AXES) == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)

    def test_analytic_equal_axes(self):
        axes = ((Z_AXIS, Z_AXIS), (Z_AXIS, Z_AXIS))
        assert chsh_analytic(*axes) == pytest.approx(-2.0, abs=1e-12)

    def test_monte_carlo_converges(self):
        result = chsh_value(*OPTIMAL_CHSH_AXES, trials=400000, seed=20240601)
        assert result.estimate == pytest.approx(result.analytic, abs=0.02)
        assert result.violation_margin > 0.0

    def test_determinism(self):
        r1 = chsh_value(*OPTIMAL_CHSH_AXES, trials=5000, seed=1)
        r2 = chsh_value(*OPTIMAL_CHSH_AXES, trials=5000, seed=1)
        assert r1 == r2

    def test_marginals_converge_to_half(self):
        from blcsim import kernels

        counts = kernels.sample_pair_counts(
            singlet().amplitudes,
            (Z_AXIS,),
            (1.0,),
            (X_AXIS,),
            (1.0,),
            first_b=False,
            seed=77,
            n_trials=100000,
        )
        p_a_plus = counts[0, 0, :, :].sum() / 100000
        p_b_plus = counts[0, :, 0, 0].sum() / 100000
        assert p_a_plus == pytest.approx(0.5, abs=0.005)
        assert p_b_plus == pytest.approx(0.5, abs=0.005)


def test_state_vector_requires_normalization():
    with pytest.raises(StateError):
        StateVector(np.array([1.0, 1.0, 0.0, 0.0], dtype=complex))


def test_factor_product_rejects_entangled():
    with pytest.raises(StateError):
        factor_product(singlet())
