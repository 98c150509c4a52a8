"""NumPy fallback kernels.

Vectorized across replicates with an active-set sweep: each pass simulates a
block of grid cells for every replicate still short of its target, so memory
stays bounded while the per-step Python overhead is amortized.
"""

import numpy as np

_TINY_U = 2.0 ** -53      # smallest uniform admitted into the transforms
_TINY_W = 1e-300          # floor for the exponential deviate

# per-pass scratch budget in doubles; the cell block adapts to the active count
_BLOCK_BUDGET = 1 << 22


def _block(n_active, remaining):
    m = max(16, _BLOCK_BUDGET // max(n_active, 1))
    return int(min(m, 8192, remaining))


def _stable_from_uniforms(alpha, u, v):
    # Kanter's representation of the one-sided stable law with Laplace
    # transform exp(-eta**alpha); clamps only touch zero-probability edges
    theta = np.pi * np.maximum(u, _TINY_U)
    w = np.maximum(-np.log1p(-v), _TINY_W)
    a = (np.sin((1.0 - alpha) * theta)
         * np.sin(alpha * theta) ** (alpha / (1.0 - alpha))
         / np.sin(theta) ** (1.0 / (1.0 - alpha)))
    return (a / w) ** ((1.0 - alpha) / alpha)


def standard_stable(alpha, n, bit_generator):
    """n one-sided stable deviates with transform exp(-eta**alpha)."""
    rng = np.random.Generator(bit_generator)
    u = rng.random((int(n), 2))
    return _stable_from_uniforms(alpha, u[:, 0], u[:, 1])


def _cell_increments(alphas, scales, a1, a2, shape, rng):
    dh1 = np.zeros(shape)
    dh2 = np.zeros(shape)
    for j in range(len(alphas)):
        u = rng.random(shape + (2,))
        x = scales[j] * _stable_from_uniforms(alphas[j], u[..., 0], u[..., 1])
        dh1 += a1[j] * x
        dh2 += a2[j] * x
    return dh1, dh2


def first_passage_pairs(alphas, rates, a1, a2, dx, t1s, t2s, max_cells,
                        bit_generator):
    """First grid cells where each component exceeds its per-replicate level.

    Returns ``(k1, k2, truncated)``; ``k`` entries are -1 where the budget of
    ``max_cells`` cells ran out before the crossing.
    """
    rng = np.random.Generator(bit_generator)
    t1s = np.asarray(t1s, dtype=float)
    t2s = np.asarray(t2s, dtype=float)
    n = t1s.shape[0]
    scales = (rates * dx) ** (1.0 / alphas)
    k1 = np.full(n, -1, dtype=np.int64)
    k2 = np.full(n, -1, dtype=np.int64)
    h1 = np.zeros(n)
    h2 = np.zeros(n)
    active = np.arange(n)
    done = 0
    while active.size and done < max_cells:
        m = _block(active.size, max_cells - done)
        dh1, dh2 = _cell_increments(alphas, scales, a1, a2, (active.size, m), rng)
        c1 = h1[active, None] + np.cumsum(dh1, axis=1)
        c2 = h2[active, None] + np.cumsum(dh2, axis=1)
        over1 = c1 > t1s[active, None]
        over2 = c2 > t2s[active, None]
        new1 = over1.any(axis=1) & (k1[active] < 0)
        new2 = over2.any(axis=1) & (k2[active] < 0)
        k1[active[new1]] = done + 1 + np.argmax(over1[new1], axis=1)
        k2[active[new2]] = done + 1 + np.argmax(over2[new2], axis=1)
        h1[active] = c1[:, -1]
        h2[active] = c2[:, -1]
        done += m
        active = active[(k1[active] < 0) | (k2[active] < 0)]
    truncated = (k1 < 0) | (k2 < 0)
    return k1, k2, truncated


def crossing_grid(alphas, rates, a1, a2, dx, levels1, levels2, n_reps,
                  max_cells, bit_generator):
    """First-passage cell indexes of both components over shared increasing
    level grids; one (K1, K2) row per replicate, -1 where truncated."""
    rng = np.random.Generator(bit_generator)
    levels1 = np.asarray(levels1, dtype=float)
    levels2 = np.asarray(levels2, dtype=float)
    n = int(n_reps)
    m1, m2 = levels1.shape[0], levels2.shape[0]
    scales = (rates * dx) ** (1.0 / alphas)
    K1 = np.full((n, m1), -1, dtype=np.int64)
    K2 = np.full((n, m2), -1, dtype=np.int64)
    h1 = np.zeros(n)
    h2 = np.zeros(n)
    active = np.arange(n)
    done = 0
    while active.size and done < max_cells:
        m = _block(active.size, max_cells - done)
        dh1, dh2 = _cell_increments(alphas, scales, a1, a2, (active.size, m), rng)
        c1 = h1[active, None] + np.cumsum(dh1, axis=1)
        c2 = h2[active, None] + np.cumsum(dh2, axis=1)
        for K, c, levels, mm in ((K1, c1, levels1, m1), (K2, c2, levels2, m2)):
            for p in range(mm):
                col = K[active, p]
                hit = (col < 0) & (c[:, -1] > levels[p])
                if hit.any():
                    rows = active[hit]
                    K[rows, p] = done + 1 + np.argmax(c[hit] > levels[p], axis=1)
        h1[active] = c1[:, -1]
        h2[active] = c2[:, -1]
        done += m
        active = active[(K1[active, -1] < 0) | (K2[active, -1] < 0)]
    truncated = (K1[:, -1] < 0) | (K2[:, -1] < 0)
    return K1, K2, truncated


def ctrw_counts(tail_index, cum_probs, cos_t, sin_t, horizon, n_reps,
                max_steps, bit_generator):
    """Renewal counts of both components of the heavy-tailed interarrival
    walk up to ``horizon``: number of partial sums at or below it."""
    rng = np.random.Generator(bit_generator)
    cum_probs = np.asarray(cum_probs, dtype=float)
    cos_t = np.asarray(cos_t, dtype=float)
    sin_t = np.asarray(sin_t, dtype=float)
    n = int(n_reps)
    T1 = np.zeros(n)
    T2 = np.zeros(n)
    n1 = np.zeros(n, dtype=np.int64)
    n2 = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    steps = 0
    while active.size and steps < max_steps:
        m = _block(active.size, max_steps - steps)
        u = rng.random((active.size, m, 2))
        idx = np.searchsorted(cum_probs, u[..., 0], side="right")
        idx = np.minimum(idx, len(cum_probs) - 1)
        r = np.maximum(u[..., 1], _TINY_U) ** (-1.0 / tail_index)
        c1 = T1[active, None] + np.cumsum(r * cos_t[idx], axis=1)
        c2 = T2[active, None] + np.cumsum(r * sin_t[idx], axis=1)
        n1[active] += (c1 <= horizon).sum(axis=1)
        n2[active] += (c2 <= horizon).sum(axis=1)
        T1[active] = c1[:, -1]
        T2[active] = c2[:, -1]
        steps += m
        active = active[(T1[active] <= horizon) | (T2[active] <= horizon)]
    truncated = (T1 <= horizon) | (T2 <= horizon)
    return n1, n2, truncated
