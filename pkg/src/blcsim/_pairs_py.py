"""Pure-Python sampling kernel: the reference twin of the compiled module.

One trial = four uniform draws from the trial's quantum stream (first axis,
first sign, second axis, second sign) driving a sequential projective
measurement of a two-spin state.  The compiled kernel in ``_pairs.pyx`` must
execute the same IEEE-754 operations in the same order, so a given
(seed, trial) yields identical outcomes on either backend; keep the two in
lockstep when editing.
"""

from __future__ import annotations

from math import sqrt

from .rng import _GOLDEN, _INV_2_53, _MASK, mix64, stream_state

# Flat index pairs [(p0, p1), ...] on which a one-factor operator acts:
# iterate the spectator index, transform the measured one.
_PAIRS_A = ((2, 1), (0, 3))
_PAIRS_B = ((2, 0), (1, 3))


def _sample_one(amps8, axes_a, w_a, axes_b, w_b, first_b, seed, trial):
    """Measure one pair; returns (ia, sa, ib, sb) with signs as 0:(+1)/1:(-1)."""
    state = stream_state(seed, trial, 0)
    psi = list(amps8)

    if first_b:
        order = ((axes_b, w_b, _PAIRS_B), (axes_a, w_a, _PAIRS_A))
    else:
        order = ((axes_a, w_a, _PAIRS_A), (axes_b, w_b, _PAIRS_B))

    results = []
    for axes, weights, pairs in order:
        state = (state + _GOLDEN) & _MASK
        u_axis = (mix64(state) >> 11) * _INV_2_53
        state = (state + _GOLDEN) & _MASK
        u_sign = (mix64(state) >> 11) * _INV_2_53

        n = len(weights)
        i = n - 1
        cum = 0.0
        for j in range(n):
            cum += weights[j]
            if u_axis < cum:
                i = j
                break
        nx, ny, nz = axes[i]
        h00 = 0.5 * (1.0 + nz)
        h11 = 0.5 * (1.0 - nz)
        hre = 0.5 * nx
        him = -0.5 * ny

        w = [0.0] * 8
        p = 0.0
        for p0, p1 in pairs:
            a_re = psi[2 * p0]
            a_im = psi[2 * p0 + 1]
            b_re = psi[2 * p1]
            b_im = psi[2 * p1 + 1]
            w0_re = h00 * a_re + hre * b_re - him * b_im
            w0_im = h00 * a_im + hre * b_im + him * b_re
            w1_re = hre * a_re + him * a_im + h11 * b_re
            w1_im = hre * a_im - him * a_re + h11 * b_im
            w[2 * p0] = w0_re
            w[2 * p0 + 1] = w0_im
            w[2 * p1] = w1_re
            w[2 * p1 + 1] = w1_im
            p += w0_re * w0_re + w0_im * w0_im + w1_re * w1_re + w1_im * w1_im

        if u_sign < p:
            s = 0
            inv = 1.0 / sqrt(p)
            for m in range(8):
                psi[m] = w[m] * inv
        else:
            s = 1
            inv = 1.0 / sqrt(1.0 - p)
            for m in range(8):
                psi[m] = (psi[m] - w[m]) * inv
        results.append((i, s))

    if first_b:
        (ib, sb), (ia, sa) = results
    else:
        (ia, sa), (ib, sb) = results
    return ia, sa, ib, sb


def sample_pair(amps8, axes_a, w_a, axes_b, w_b, first_b, seed, trial):
    return _sample_one(amps8, axes_a, w_a, axes_b, w_b, first_b, seed & _MASK, trial)


def sample_pair_counts(amps8, axes_a, w_a, axes_b, w_b, first_b, seed, n_trials, trial0):
    """Aggregate outcome counts, flat C-order (ia, sa, ib, sb)."""
    nb = len(w_b)
    counts = [0] * (len(w_a) * 2 * nb * 2)
    seed &= _MASK
    for k in range(n_trials):
        ia, sa, ib, sb = _sample_one(amps8, axes_a, w_a, axes_b, w_b, first_b, seed, trial0 + k)
        counts[((ia * 2 + sa) * nb + ib) * 2 + sb] += 1
    return counts
