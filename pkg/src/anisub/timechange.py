"""Markov processes run on the component clocks of a bivariate inverse:
finite chains, counting processes, and Brownian coordinates.

The chain and counting samplers use the interarrival route: exponential
event clocks are laid down in operational time and the subordinator pair is
evaluated at the merged event times by drawing exact stationary increments,
so no grid enters.  The equivalent composition route (first-passage inverse
values, then the chain at those operational times) is kept as a cross-check
mode selected with ``route="inverse"``; only that route uses ``dx``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import ConfigError, DomainError
from .inverse import DEFAULT_MAX_CELLS, inverse_at_times, sample_inverse_batch
from .models import (BivariateModel, SpectralMeasure, SpectralStable,
                     check_alpha)
from .rng import as_generator
from .simulate import sample_increments

__all__ = ["PHASES", "CTMCSpec", "TrajectoryPoint", "interarrival_pairs",
           "sample_ctmc_batch", "sample_ctmc_timechanged",
           "sample_bifrac_poisson_batch", "sample_bifrac_poisson",
           "subdiffusion_batch", "sample_subdiffusion", "write_trajectory_csv",
           "write_counts_ndjson"]

PHASES = ("rest-both", "rest-x-moves-y", "rest-y-moves-x", "moves-both")

_MAX_EVENTS = 100_000


@dataclass(frozen=True)
class CTMCSpec:
    """Two independent finite chains with exponential holding clocks.

    ``a`` and ``b`` are the row-stochastic transition matrices of the
    embedded chains; ``xi1``/``xi2`` the clock rates (mean holding 1/xi).
    Both chains start at the first listed state.
    """

    states1: Tuple
    states2: Tuple
    a: np.ndarray
    b: np.ndarray
    xi1: float
    xi2: float

    def __post_init__(self):
        object.__setattr__(self, "states1", tuple(self.states1))
        object.__setattr__(self, "states2", tuple(self.states2))
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        for name, mat, states in (("a", self.a, self.states1),
                                  ("b", self.b, self.states2)):
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ConfigError(f"ctmc.{name}", "transition matrix must be square")
            if mat.shape[0] != len(states):
                raise ConfigError(f"ctmc.{name}", "matrix size must match the state list")
            if (mat < 0).any() or np.abs(mat.sum(axis=1) - 1.0).max() > 1e-12:
                raise ConfigError(f"ctmc.{name}", "rows must be stochastic within 1e-12")
        if not (self.xi1 > 0 and self.xi2 > 0):
            raise ConfigError("ctmc.xi", "clock rates must be positive")


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    x1: float
    x2: float
    phase: str


def interarrival_pairs(model: BivariateModel, xi1: float, xi2: float,
                       n: int, rng):
    """n exact draws of the first holding-time pair of the time-changed
    chains: the subordinator components evaluated at independent exponential
    operational clocks."""
    if not (xi1 > 0 and xi2 > 0):
        raise DomainError("rates must be positive")
    gen = as_generator(rng)
    n = int(n)
    w1 = gen.exponential(1.0 / xi1, n)
    w2 = gen.exponential(1.0 / xi2, n)
    lo = np.minimum(w1, w2)
    hi = np.maximum(w1, w2)
    d1a, d2a = sample_increments(model, lo, gen)
    d1b, d2b = sample_increments(model, hi - lo, gen)
    h1 = np.where(w1 <= w2, d1a, d1a + d1b)
    h2 = np.where(w2 <= w1, d2a, d2a + d2b)
    return h1, h2


def _event_loop(model, xi1, xi2, t1, t2, n, gen, jump1, jump2):
    """Advance both event clocks through the subordinator pair until each
    chain's next jump would land past its physical horizon.

    ``jump1``/``jump2`` are callbacks receiving the replicate indexes whose
    chain takes one embedded step.
    """
    frontier = np.zeros(n)
    h1 = np.zeros(n)
    h2 = np.zeros(n)
    next1 = gen.exponential(1.0 / xi1, n)
    next2 = gen.exponential(1.0 / xi2, n)
    done1 = np.zeros(n, dtype=bool)
    done2 = np.zeros(n, dtype=bool)
    for _ in range(_MAX_EVENTS):
        active = ~(done1 & done2)
        if not active.any():
            return
        cand = np.where(done1, np.inf, next1)
        cand2 = np.where(done2, np.inf, next2)
        is1 = cand <= cand2
        nxt = np.where(is1, cand, cand2)
        idx = np.flatnonzero(active)
        dt = nxt[idx] - frontier[idx]
        d1, d2 = sample_increments(model, dt, gen)
        h1[idx] += d1
        h2[idx] += d2
        frontier[idx] = nxt[idx]
        ev1 = idx[is1[idx]]
        ev2 = idx[~is1[idx]]
        if ev1.size:
            over = h1[ev1] > t1
            done1[ev1[over]] = True
            take = ev1[~over]
            if take.size:
                jump1(take)
                next1[take] += gen.exponential(1.0 / xi1, take.size)
        if ev2.size:
            over = h2[ev2] > t2
            done2[ev2[over]] = True
            take = ev2[~over]
            if take.size:
                jump2(take)
                next2[take] += gen.exponential(1.0 / xi2, take.size)
    raise DomainError("event budget exhausted; horizons too deep for the "
                      "time-changed chain sampler")


def _step_chain(states, matrix, rows, gen):
    cum = np.cumsum(matrix, axis=1)
    u = gen.random(rows.size)
    states[rows] = np.minimum(
        np.array([np.searchsorted(cum[s], x, side="right")
                  for s, x in zip(states[rows], u)]),
        matrix.shape[0] - 1)


def sample_ctmc_batch(spec: CTMCSpec, model: BivariateModel, t1: float,
                      t2: float, n: int, rng, dx: float = 0.01,
                      route: str = "interarrival"):
    """State-index pairs of the time-changed chains at ``(t1, t2)``."""
    if t1 < 0 or t2 < 0:
        raise DomainError("times must be nonnegative")
    gen = as_generator(rng)
    n = int(n)
    s1 = np.zeros(n, dtype=np.int64)
    s2 = np.zeros(n, dtype=np.int64)
    if t1 == 0 and t2 == 0:
        return s1, s2
    if route == "interarrival":
        _event_loop(model, spec.xi1, spec.xi2, t1, t2, n, gen,
                    lambda rows: _step_chain(s1, spec.a, rows, gen),
                    lambda rows: _step_chain(s2, spec.b, rows, gen))
        return s1, s2
    if route != "inverse":
        raise DomainError(f"unknown route {route!r}")
    # cross-check mode: evaluate the plain rate-xi chains at the inverse values
    l1, l2, _, trunc = sample_inverse_batch(
        model, np.full(n, float(t1)), np.full(n, float(t2)), dx, gen)
    if trunc.any():
        raise DomainError("truncated inverse draws in route='inverse'")
    for states, matrix, xi, l in ((s1, spec.a, spec.xi1, l1),
                                  (s2, spec.b, spec.xi2, l2)):
        steps = gen.poisson(xi * l)
        pending = steps.copy()
        while True:
            rows = np.flatnonzero(pending > 0)
            if rows.size == 0:
                break
            _step_chain(states, matrix, rows, gen)
            pending[rows] -= 1
    return s1, s2


def sample_ctmc_timechanged(spec: CTMCSpec, model: BivariateModel, t1: float,
                            t2: float, dx: float, rng,
                            route: str = "interarrival"):
    """One draw of the time-changed chain pair, as state labels."""
    s1, s2 = sample_ctmc_batch(spec, model, t1, t2, 1, rng, dx=dx, route=route)
    return spec.states1[int(s1[0])], spec.states2[int(s2[0])]


def sample_bifrac_poisson_batch(xi1: float, xi2: float, alpha: float,
                                m: SpectralMeasure, t1: float, t2: float,
                                n: int, rng, dx: float = 0.01,
                                route: str = "renewal"):
    """Count pairs of the dependent fractional counting process: independent
    unit-rate-xi counters run on the component clocks of the inverse pair.

    ``alpha=1`` selects the classical reduction (the time change is the
    identity, so counts are plain Poisson).
    """
    if not (xi1 > 0 and xi2 > 0):
        raise DomainError("rates must be positive")
    if t1 < 0 or t2 < 0:
        raise DomainError("times must be nonnegative")
    gen = as_generator(rng)
    n = int(n)
    if float(alpha) == 1.0:
        return gen.poisson(xi1 * t1, n), gen.poisson(xi2 * t2, n)
    model = SpectralStable(check_alpha(alpha), m)
    if route == "renewal":
        n1 = np.zeros(n, dtype=np.int64)
        n2 = np.zeros(n, dtype=np.int64)
        _event_loop(model, xi1, xi2, t1, t2, n, gen,
                    lambda rows: np.add.at(n1, rows, 1),
                    lambda rows: np.add.at(n2, rows, 1))
        return n1, n2
    if route != "inverse":
        raise DomainError(f"unknown route {route!r}")
    l1, l2, _, trunc = sample_inverse_batch(
        model, np.full(n, float(t1)), np.full(n, float(t2)), dx, gen)
    if trunc.any():
        raise DomainError("truncated inverse draws in route='inverse'")
    return gen.poisson(xi1 * l1), gen.poisson(xi2 * l2)


def sample_bifrac_poisson(xi1, xi2, alpha, m, t1, t2, dx, rng,
                          route: str = "renewal"):
    """One count pair ``(N1, N2)``."""
    n1, n2 = sample_bifrac_poisson_batch(xi1, xi2, alpha, m, t1, t2, 1, rng,
                                         dx=dx, route=route)
    return int(n1[0]), int(n2[0])


def _phase_labels(rest1, rest2):
    out = np.where(rest1 & rest2, 0,
                   np.where(rest1, 1, np.where(rest2, 2, 3)))
    return out


def subdiffusion_batch(alpha: float, m: SpectralMeasure, t_grid, n: int, rng,
                       dx: float = 0.01, max_cells: int = DEFAULT_MAX_CELLS):
    """n trajectories of the anisotropic subdiffusion read on ``t_grid``.

    Returns a dict of arrays: inverse clock values ``l1``/``l2``, Brownian
    coordinates ``b1``/``b2``, phase codes (indexes into ``PHASES``), and the
    truncation flags.  Brownian increments are tied to the clock increments
    (variance equal to the clock advance), which is exact in law and avoids a
    second discretization.
    """
    gen = as_generator(rng)
    t_grid = np.asarray(t_grid, dtype=float)
    model = SpectralStable(check_alpha(alpha), m)
    L1, L2, K1, K2, trunc = inverse_at_times(
        model, t_grid, t_grid, n, dx, gen, max_cells)
    out = {"t": t_grid, "l1": L1, "l2": L2, "truncated": trunc}
    for name, L, K in (("b1", L1, K1), ("b2", L2, K2)):
        dl = np.diff(np.concatenate([np.zeros((int(n), 1)), L], axis=1), axis=1)
        z = gen.standard_normal(L.shape)
        out[name] = np.cumsum(np.sqrt(np.maximum(dl, 0.0)) * z, axis=1)
    prev1 = np.concatenate([np.ones((int(n), 1), dtype=np.int64), K1[:, :-1]], axis=1)
    prev2 = np.concatenate([np.ones((int(n), 1), dtype=np.int64), K2[:, :-1]], axis=1)
    out["phase"] = _phase_labels(K1 == prev1, K2 == prev2)
    return out


def sample_subdiffusion(alpha, m, t_grid, dx, rng,
                        max_cells: int = DEFAULT_MAX_CELLS):
    """One trajectory as a list of TrajectoryPoints."""
    data = subdiffusion_batch(alpha, m, t_grid, 1, rng, dx=dx, max_cells=max_cells)
    return [TrajectoryPoint(float(t), float(x1), float(x2), PHASES[int(p)])
            for t, x1, x2, p in zip(data["t"], data["b1"][0], data["b2"][0],
                                    data["phase"][0])]


def write_trajectory_csv(points: Sequence[TrajectoryPoint],
                         stream: io.TextIOBase) -> None:
    stream.write("t,x1,x2,phase\n")
    for p in points:
        stream.write(f"{p.t!r},{p.x1!r},{p.x2!r},{p.phase}\n")


def write_counts_ndjson(t1, t2, n1, n2, stream: io.TextIOBase) -> None:
    for a, b in zip(n1, n2):
        stream.write(json.dumps({"t1": float(t1), "t2": float(t2),
                                 "n1": int(a), "n2": int(b)}) + "\n")
