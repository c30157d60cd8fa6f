"""Backend equivalence and determinism of the sampling kernels."""

import numpy as np
import pytest

from blcsim import kernels
from blcsim.quantum import OPTIMAL_CHSH_AXES, singlet

Z_AXIS = (0.0, 0.0, 1.0)
X_AXIS = (1.0, 0.0, 0.0)

AMPS = singlet().amplitudes
AA, AB = OPTIMAL_CHSH_AXES
HALF = (0.5, 0.5)

both_backends = pytest.mark.skipif(
    "compiled" not in kernels.available_backends(),
    reason="compiled kernel not built",
)


@both_backends
class TestBackendEquivalence:
    def test_counts_identical(self):
        kwargs = dict(first_b=False, seed=42, n_trials=50000)
        c_py = kernels.sample_pair_counts(AMPS, AA, HALF, AB, HALF, backend="python", **kwargs)
        c_cy = kernels.sample_pair_counts(AMPS, AA, HALF, AB, HALF, backend="compiled", **kwargs)
        assert np.array_equal(c_py, c_cy)

    def test_single_trials_identical(self):
        for trial in (0, 1, 2, 17, 999, 123456):
            for first_b in (False, True):
                p = kernels.sample_pair(
                    AMPS, AA, HALF, AB, HALF,
                    first_b=first_b, seed=7, trial=trial, backend="python",
                )
                c = kernels.sample_pair(
                    AMPS, AA, HALF, AB, HALF,
                    first_b=first_b, seed=7, trial=trial, backend="compiled",
                )
                assert p == c

    def test_complex_axes_identical(self):
        axes = ((0.6, 0.48, 0.64),)
        c_py = kernels.sample_pair_counts(
            AMPS, axes, (1.0,), ((0.0, 1.0, 0.0),), (1.0,),
            first_b=True, seed=3, n_trials=20000, backend="python",
        )
        c_cy = kernels.sample_pair_counts(
            AMPS, axes, (1.0,), ((0.0, 1.0, 0.0),), (1.0,),
            first_b=True, seed=3, n_trials=20000, backend="compiled",
        )
        assert np.array_equal(c_py, c_cy)


class TestCounterDeterminism:
    def test_batch_split_invariance(self):
        whole = kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=False, seed=5, n_trials=3000
        )
        parts = kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=False, seed=5, n_trials=1100
        ) + kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=False, seed=5, n_trials=1900, trial0=1100
        )
        assert np.array_equal(whole, parts)

    def test_counts_match_per_trial_stream(self):
        counts = kernels.sample_pair_counts(
            AMPS, (Z_AXIS,), (1.0,), (X_AXIS,), (1.0,), first_b=True, seed=9, n_trials=500
        )
        manual = np.zeros_like(counts)
        for k in range(500):
            ia, sa, ib, sb = kernels.sample_pair(
                AMPS, (Z_AXIS,), (1.0,), (X_AXIS,), (1.0,), first_b=True, seed=9, trial=k
            )
            manual[ia, 0 if sa > 0 else 1, ib, 0 if sb > 0 else 1] += 1
        assert np.array_equal(counts, manual)

    def test_seed_sensitivity(self):
        c1 = kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=False, seed=1, n_trials=2000
        )
        c2 = kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=False, seed=2, n_trials=2000
        )
        assert not np.array_equal(c1, c2)


class TestAgainstAnalyticTables:
    def test_same_axis_anticorrelation(self):
        counts = kernels.sample_pair_counts(
            AMPS, (Z_AXIS,), (1.0,), (Z_AXIS,), (1.0,), first_b=False, seed=101, n_trials=100000
        )
        same_sign = counts[0, 0, 0, 0] + counts[0, 1, 0, 1]
        assert same_sign == 0
        assert counts.sum() == 100000

    def test_conditional_frequency_matches_half_angle(self):
        # Joint p(+,+) with axes at 60 degrees is 0.5 * sin^2(30 deg) = 0.125.
        import math

        axis_b = (math.sin(math.pi / 3), 0.0, math.cos(math.pi / 3))
        n = 200000
        counts = kernels.sample_pair_counts(
            AMPS, (Z_AXIS,), (1.0,), (axis_b,), (1.0,), first_b=False, seed=55, n_trials=n
        )
        p_pp = counts[0, 0, 0, 0] / n
        assert p_pp == pytest.approx(0.125, abs=0.005)

    def test_axis_weights_respected(self):
        n = 100000
        counts = kernels.sample_pair_counts(
            AMPS,
            (Z_AXIS, X_AXIS),
            (0.9, 0.1),
            (Z_AXIS,),
            (1.0,),
            first_b=False,
            seed=13,
            n_trials=n,
        )
        f_axis1 = counts[0].sum() / n
        assert f_axis1 == pytest.approx(0.9, abs=0.01)

    def test_forced_order_gives_matching_tables(self):
        n = 100000
        c_a = kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=False, seed=31, n_trials=n
        )
        c_b = kernels.sample_pair_counts(
            AMPS, AA, HALF, AB, HALF, first_b=True, seed=32, n_trials=n
        )
        f_a, f_b = c_a / n, c_b / n
        pooled = (c_a + c_b) / (2.0 * n)
        se = np.sqrt(np.maximum(pooled * (1 - pooled), 1e-12) * (2.0 / n))
        assert np.all(np.abs(f_a - f_b) <= 3.5 * se)
