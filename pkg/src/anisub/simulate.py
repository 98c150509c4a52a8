"""Sampling of bivariate subordinator paths on an operational-time grid.

Increments are exact in distribution at any grid step: each factor draws a
one-sided stable deviate scaled to the cell width, and a shared factor's
deviate enters both components, which is what produces simultaneous jumps.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError
from .models import BivariateModel, factor_arrays
from .rng import as_generator

__all__ = ["SubordinatorPath", "sample_stable_increment", "sample_increments",
           "sample_path", "sample_terminal", "sample_pair_at", "write_path_csv"]


@dataclass(frozen=True)
class SubordinatorPath:
    """Cumulative component values on the grid ``0, dx, ..., length*dx``
    (arrays include the zero at the origin, so they have ``length+1``
    entries)."""

    dx: float
    h1: np.ndarray
    h2: np.ndarray
    model_label: str = ""

    @property
    def length(self) -> int:
        return len(self.h1) - 1

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(len(self.h1))


def sample_stable_increment(alpha, scale, dt, rng) -> float:
    """One increment of a stable subordinator with exponent
    ``scale * eta**alpha`` over a window of width ``dt``."""
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale}")
    gen = as_generator(rng)
    x = _backend.standard_stable(float(alpha), 1, gen.bit_generator)[0]
    return float((scale * dt) ** (1.0 / alpha) * x)


def sample_increments(model: BivariateModel, dts, rng):
    """Joint increments ``(dH1, dH2)`` over consecutive windows of widths
    ``dts`` (any shape); a shared stable deviate per factor and window."""
    gen = as_generator(rng)
    dts = np.asarray(dts, dtype=float)
    if (dts < 0).any():
        raise DomainError("window widths must be nonnegative")
    alphas, rates, a1, a2 = factor_arrays(model)
    dh1 = np.zeros(dts.shape)
    dh2 = np.zeros(dts.shape)
    for j in range(len(alphas)):
        x = _backend.standard_stable(alphas[j], dts.size, gen.bit_generator)
        x = x.reshape(dts.shape) * (rates[j] * dts) ** (1.0 / alphas[j])
        dh1 += a1[j] * x
        dh2 += a2[j] * x
    return dh1, dh2


def sample_path(model: BivariateModel, x_max: float, dx: float, rng) -> SubordinatorPath:
    """Path of ``ceil(x_max/dx)`` cells with exact stationary increments."""
    if not dx > 0:
        raise DomainError(f"dx must be positive, got {dx}")
    if x_max < dx:
        raise DomainError("x_max must be at least one grid cell")
    n = int(np.ceil(x_max / dx - 1e-12))
    dh1, dh2 = sample_increments(model, np.full(n, dx), rng)
    h1 = np.concatenate(([0.0], np.cumsum(dh1)))
    h2 = np.concatenate(([0.0], np.cumsum(dh2)))
    return SubordinatorPath(dx=float(dx), h1=h1, h2=h2, model_label=model.label)


def sample_terminal(model: BivariateModel, x: float, n: int, rng):
    """n independent draws of ``(H1(x), H2(x))`` (single-window shortcut:
    increments over disjoint cells aggregate exactly)."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return sample_increments(model, np.full(int(n), float(x)), rng)


def sample_pair_at(model: BivariateModel, t1: float, t2: float, n: int, rng):
    """n independent draws of the two-time pair ``(H1(t1), H2(t2))``."""
    if t1 < 0 or t2 < 0:
        raise DomainError("times must be nonnegative")
    lo, hi = min(t1, t2), max(t1, t2)
    n = int(n)
    if lo == 0.0:
        da1 = da2 = np.zeros(n)
    else:
        da1, da2 = sample_increments(model, np.full(n, lo), rng)
    if hi > lo:
        db1, db2 = sample_increments(model, np.full(n, hi - lo), rng)
    else:
        db1 = db2 = np.zeros(n)
    if t1 <= t2:
        return da1, da2 + db2
    return da1 + db1, da2


def write_path_csv(path: SubordinatorPath, stream: io.TextIOBase) -> None:
    """Dump one path as ``x,h1,h2`` rows (locale-independent formatting)."""
    stream.write("x,h1,h2\n")
    for x, v1, v2 in zip(path.x, path.h1, path.h2):
        stream.write(f"{float(x)!r},{float(v1)!r},{float(v2)!r}\n")
