# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernel.

Mirrors ``_pairs_py.py`` operation for operation; the two backends must stay
bit-identical.  Do not enable value-changing optimizations (fast-math, FMA
contraction) when building.
"""

from libc.math cimport sqrt
from libc.stdint cimport int64_t, uint64_t

import numpy as np

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t stream_state(uint64_t seed, uint64_t trial, uint64_t lane) nogil:
    cdef uint64_t z = mix64(seed + GOLDEN * (trial + 1))
    return mix64(z + GOLDEN * (lane + 1))


cdef void _measure(double* psi, const double[:, ::1] axes, const double[::1] weights,
                   const int* pairs, double u_axis, double u_sign,
                   int* out_axis, int* out_sign) nogil:
    cdef int n = <int>weights.shape[0]
    cdef int i = n - 1
    cdef int j, m, p0, p1, q
    cdef double cum = 0.0
    for j in range(n):
        cum += weights[j]
        if u_axis < cum:
            i = j
            break
    cdef double nx = axes[i, 0]
    cdef double ny = axes[i, 1]
    cdef double nz = axes[i, 2]
    cdef double h00 = 0.5 * (1.0 + nz)
    cdef double h11 = 0.5 * (1.0 - nz)
    cdef double hre = 0.5 * nx
    cdef double him = -0.5 * ny

    cdef double w[8]
    cdef double p = 0.0
    cdef double a_re, a_im, b_re, b_im, w0_re, w0_im, w1_re, w1_im, inv
    for q in range(2):
        p0 = pairs[2 * q]
        p1 = pairs[2 * q + 1]
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
        out_sign[0] = 0
        inv = 1.0 / sqrt(p)
        for m in range(8):
            psi[m] = w[m] * inv
    else:
        out_sign[0] = 1
        inv = 1.0 / sqrt(1.0 - p)
        for m in range(8):
            psi[m] = (psi[m] - w[m]) * inv
    out_axis[0] = i


cdef void _sample_one(const double[::1] amps8,
                      const double[:, ::1] axes_a, const double[::1] w_a,
                      const double[:, ::1] axes_b, const double[::1] w_b,
                      bint first_b, uint64_t seed, uint64_t trial,
                      int* ia, int* sa, int* ib, int* sb) nogil:
    cdef uint64_t state = stream_state(seed, trial, 0)
    cdef double psi[8]
    cdef int m
    for m in range(8):
        psi[m] = amps8[m]

    cdef int pairs_a[4]
    cdef int pairs_b[4]
    pairs_a[0] = 2; pairs_a[1] = 1; pairs_a[2] = 0; pairs_a[3] = 3
    pairs_b[0] = 2; pairs_b[1] = 0; pairs_b[2] = 1; pairs_b[3] = 3

    cdef double u_axis, u_sign
    cdef int i1, s1, i2, s2

    state = state + GOLDEN
    u_axis = <double>(mix64(state) >> 11) * INV_2_53
    state = state + GOLDEN
    u_sign = <double>(mix64(state) >> 11) * INV_2_53
    if first_b:
        _measure(psi, axes_b, w_b, pairs_b, u_axis, u_sign, &i1, &s1)
    else:
        _measure(psi, axes_a, w_a, pairs_a, u_axis, u_sign, &i1, &s1)

    state = state + GOLDEN
    u_axis = <double>(mix64(state) >> 11) * INV_2_53
    state = state + GOLDEN
    u_sign = <double>(mix64(state) >> 11) * INV_2_53
    if first_b:
        _measure(psi, axes_a, w_a, pairs_a, u_axis, u_sign, &i2, &s2)
        ia[0] = i2; sa[0] = s2; ib[0] = i1; sb[0] = s1
    else:
        _measure(psi, axes_b, w_b, pairs_b, u_axis, u_sign, &i2, &s2)
        ia[0] = i1; sa[0] = s1; ib[0] = i2; sb[0] = s2


def sample_pair(amps8, axes_a, w_a, axes_b, w_b, first_b, seed, trial):
    cdef double[::1] amps_v = amps8
    cdef double[:, ::1] aa = axes_a
    cdef double[::1] wa = w_a
    cdef double[:, ::1] ab = axes_b
    cdef double[::1] wb = w_b
    cdef int ia = 0, sa = 0, ib = 0, sb = 0
    _sample_one(amps_v, aa, wa, ab, wb, bool(first_b),
                <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), <uint64_t>trial,
                &ia, &sa, &ib, &sb)
    return ia, sa, ib, sb


def sample_pair_counts(amps8, axes_a, w_a, axes_b, w_b, first_b, seed, n_trials, trial0):
    """Aggregate outcome counts, flat C-order (ia, sa, ib, sb)."""
    cdef double[::1] amps_v = amps8
    cdef double[:, ::1] aa = axes_a
    cdef double[::1] wa = w_a
    cdef double[:, ::1] ab = axes_b
    cdef double[::1] wb = w_b
    cdef bint fb = bool(first_b)
    cdef uint64_t s = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t t0 = <uint64_t>trial0
    cdef uint64_t n = <uint64_t>n_trials
    cdef int nb = <int>wb.shape[0]
    counts_arr = np.zeros(wa.shape[0] * 2 * nb * 2, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef uint64_t k
    cdef int ia = 0, sa = 0, ib = 0, sb = 0
    with nogil:
        for k in range(n):
            _sample_one(amps_v, aa, wa, ab, wb, fb, s, t0 + k, &ia, &sa, &ib, &sb)
            counts[((ia * 2 + sa) * nb + ib) * 2 + sb] += 1
    return counts_arr
