# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: per-replicate loops over grid cells with O(1) memory,
drawing straight from the numpy bit generator."""

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport M_PI, log1p, pow, sin
from numpy.random cimport bitgen_t

cdef double TINY_U = 1.1102230246251565e-16   # 2**-53
cdef double TINY_W = 1e-300

cdef const char *CAPSULE = "BitGenerator"


cdef bitgen_t *_bitgen(object bit_generator) except NULL:
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE):
        raise ValueError("expected a numpy BitGenerator")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE)


cdef inline double _pow_fast(double x, double e) noexcept nogil:
    # integer exponents dominate in practice (alpha = 1/2 gives 1 and 2)
    if e == 1.0:
        return x
    if e == 2.0:
        return x * x
    return pow(x, e)


cdef inline double _std_stable(bitgen_t *bg, double alpha, double e_in,
                               double e_sin, double e_out) noexcept nogil:
    # Kanter's representation; exponents precomputed per factor:
    # e_in = alpha/(1-alpha), e_sin = 1/(1-alpha), e_out = (1-alpha)/alpha
    cdef double u = bg.next_double(bg.state)
    cdef double v = bg.next_double(bg.state)
    cdef double theta, w, a
    if u < TINY_U:
        u = TINY_U
    theta = M_PI * u
    w = -log1p(-v)
    if w < TINY_W:
        w = TINY_W
    a = sin((1.0 - alpha) * theta) * _pow_fast(sin(alpha * theta), e_in) \
        / _pow_fast(sin(theta), e_sin)
    return _pow_fast(a / w, e_out)


def standard_stable(double alpha, n, bit_generator):
    """n one-sided stable deviates with transform exp(-eta**alpha)."""
    cdef Py_ssize_t i, nn = int(n)
    cdef double[::1] out = np.empty(nn, dtype=np.float64)
    cdef double e_in = alpha / (1.0 - alpha)
    cdef double e_sin = 1.0 / (1.0 - alpha)
    cdef double e_out = (1.0 - alpha) / alpha
    cdef bitgen_t *bg = _bitgen(bit_generator)
    with bit_generator.lock, nogil:
        for i in range(nn):
            out[i] = _std_stable(bg, alpha, e_in, e_sin, e_out)
    return np.asarray(out)


def first_passage_pairs(alphas, rates, a1, a2, double dx, t1s, t2s,
                        max_cells, bit_generator):
    """First grid cells where each component exceeds its per-replicate level.

    Returns ``(k1, k2, truncated)``; ``k`` entries are -1 where the budget of
    ``max_cells`` cells ran out before the crossing.
    """
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] c1 = np.ascontiguousarray(a1, dtype=np.float64)
    cdef double[::1] c2 = np.ascontiguousarray(a2, dtype=np.float64)
    cdef double[::1] t1 = np.ascontiguousarray(t1s, dtype=np.float64)
    cdef double[::1] t2 = np.ascontiguousarray(t2s, dtype=np.float64)
    cdef Py_ssize_t nf = al.shape[0], n = t1.shape[0]
    cdef double[::1] sc = (np.asarray(rates, dtype=np.float64) * dx) ** (1.0 / np.asarray(alphas, dtype=np.float64))
    cdef double[::1] e_in = np.asarray(alphas, dtype=np.float64) / (1.0 - np.asarray(alphas, dtype=np.float64))
    cdef double[::1] e_sin = 1.0 / (1.0 - np.asarray(alphas, dtype=np.float64))
    cdef double[::1] e_out = (1.0 - np.asarray(alphas, dtype=np.float64)) / np.asarray(alphas, dtype=np.float64)
    cdef long long[::1] k1 = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] k2 = np.full(n, -1, dtype=np.int64)
    cdef long long cap = int(max_cells)
    cdef Py_ssize_t i, j
    cdef long long k
    cdef double h1, h2, x
    cdef bint done1, done2
    cdef bitgen_t *bg = _bitgen(bit_generator)
    with bit_generator.lock, nogil:
        for i in range(n):
            h1 = 0.0
            h2 = 0.0
            k = 0
            done1 = False
            done2 = False
            while k < cap:
                k += 1
                for j in range(nf):
                    x = sc[j] * _std_stable(bg, al[j], e_in[j], e_sin[j], e_out[j])
                    h1 += c1[j] * x
                    h2 += c2[j] * x
                if not done1 and h1 > t1[i]:
                    k1[i] = k
                    done1 = True
                if not done2 and h2 > t2[i]:
                    k2[i] = k
                    done2 = True
                if done1 and done2:
                    break
    k1a = np.asarray(k1)
    k2a = np.asarray(k2)
    return k1a, k2a, (k1a < 0) | (k2a < 0)


def crossing_grid(alphas, rates, a1, a2, double dx, levels1, levels2, n_reps,
                  max_cells, bit_generator):
    """First-passage cell indexes of both components over shared increasing
    level grids; one (K1, K2) row per replicate, -1 where truncated."""
    cdef double[::1] al = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef double[::1] c1 = np.ascontiguousarray(a1, dtype=np.float64)
    cdef double[::1] c2 = np.ascontiguousarray(a2, dtype=np.float64)
    cdef double[::1] lv1 = np.ascontiguousarray(levels1, dtype=np.float64)
    cdef double[::1] lv2 = np.ascontiguousarray(levels2, dtype=np.float64)
    cdef Py_ssize_t nf = al.shape[0], n = int(n_reps)
    cdef Py_ssize_t m1 = lv1.shape[0], m2 = lv2.shape[0]
    cdef double[::1] sc = (np.asarray(rates, dtype=np.float64) * dx) ** (1.0 / np.asarray(alphas, dtype=np.float64))
    cdef double[::1] e_in = np.asarray(alphas, dtype=np.float64) / (1.0 - np.asarray(alphas, dtype=np.float64))
    cdef double[::1] e_sin = 1.0 / (1.0 - np.asarray(alphas, dtype=np.float64))
    cdef double[::1] e_out = (1.0 - np.asarray(alphas, dtype=np.float64)) / np.asarray(alphas, dtype=np.float64)
    cdef long long[:, ::1] K1 = np.full((n, m1), -1, dtype=np.int64)
    cdef long long[:, ::1] K2 = np.full((n, m2), -1, dtype=np.int64)
    cdef long long cap = int(max_cells)
    cdef Py_ssize_t i, j, p1, p2
    cdef long long k
    cdef double h1, h2, x
    cdef bitgen_t *bg = _bitgen(bit_generator)
    with bit_generator.lock, nogil:
        for i in range(n):
            h1 = 0.0
            h2 = 0.0
            k = 0
            p1 = 0
            p2 = 0
            while k < cap and (p1 < m1 or p2 < m2):
                k += 1
                for j in range(nf):
                    x = sc[j] * _std_stable(bg, al[j], e_in[j], e_sin[j], e_out[j])
                    h1 += c1[j] * x
                    h2 += c2[j] * x
                while p1 < m1 and h1 > lv1[p1]:
                    K1[i, p1] = k
                    p1 += 1
                while p2 < m2 and h2 > lv2[p2]:
                    K2[i, p2] = k
                    p2 += 1
    K1a = np.asarray(K1)
    K2a = np.asarray(K2)
    return K1a, K2a, (K1a[:, m1 - 1] < 0) | (K2a[:, m2 - 1] < 0)


def ctrw_counts(double tail_index, cum_probs, cos_t, sin_t, double horizon,
                n_reps, max_steps, bit_generator):
    """Renewal counts of both components of the heavy-tailed interarrival
    walk up to ``horizon``: number of partial sums at or below it."""
    cdef double[::1] cp = np.ascontiguousarray(cum_probs, dtype=np.float64)
    cdef double[::1] ct = np.ascontiguousarray(cos_t, dtype=np.float64)
    cdef double[::1] st = np.ascontiguousarray(sin_t, dtype=np.float64)
    cdef Py_ssize_t na = cp.shape[0], n = int(n_reps)
    cdef long long[::1] n1 = np.zeros(n, dtype=np.int64)
    cdef long long[::1] n2 = np.zeros(n, dtype=np.int64)
    cdef unsigned char[::1] trunc = np.zeros(n, dtype=np.uint8)
    cdef long long cap = int(max_steps)
    cdef double inv_idx = 1.0 / tail_index
    cdef Py_ssize_t i, a
    cdef long long s
    cdef double t1, t2, u, r
    cdef bitgen_t *bg = _bitgen(bit_generator)
    with bit_generator.lock, nogil:
        for i in range(n):
            t1 = 0.0
            t2 = 0.0
            s = 0
            while t1 <= horizon or t2 <= horizon:
                if s >= cap:
                    trunc[i] = 1
                    break
                s += 1
                u = bg.next_double(bg.state)
                a = 0
                while a < na - 1 and u >= cp[a]:
                    a += 1
                u = bg.next_double(bg.state)
                if u < TINY_U:
                    u = TINY_U
                r = pow(u, -inv_idx)
                t1 += r * ct[a]
                t2 += r * st[a]
                if t1 <= horizon:
                    n1[i] += 1
                if t2 <= horizon:
                    n2[i] += 1
    return np.asarray(n1), np.asarray(n2), np.asarray(trunc).astype(bool)
