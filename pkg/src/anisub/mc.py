"""Mergeable Monte Carlo estimates.

Partial estimates from replicate blocks combine with the pairwise
mean/second-moment update, so splitting a budget across workers and merging
changes nothing but floating-point association order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = ["MCEstimate", "merge_all"]


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its standard error and replication count."""

    mean: float
    se: float
    n: int

    @classmethod
    def from_samples(cls, values) -> "MCEstimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        if n < 2:
            raise ValueError("need at least two replicates")
        mean = float(values.mean())
        sq = float(np.sum((values - mean) ** 2))
        return cls(mean, math.sqrt(sq / (n * (n - 1))), n)

    def _m2(self) -> float:
        # centered sum of squares, exactly recoverable from the stored se
        return self.se * self.se * self.n * (self.n - 1)

    def merge(self, other: "MCEstimate") -> "MCEstimate":
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = (self.n * self.mean + other.n * other.mean) / n
        m2 = self._m2() + other._m2() + delta * delta * self.n * other.n / n
        se = math.sqrt(m2 / (n * (n - 1))) if n > 1 else 0.0
        return MCEstimate(mean, se, n)

    def scaled(self, factor: float) -> "MCEstimate":
        return MCEstimate(self.mean * factor, abs(factor) * self.se, self.n)


def merge_all(estimates: Iterable[MCEstimate]) -> MCEstimate:
    """Fold estimates in the order given (callers sort by block index so the
    result is independent of which worker produced which block)."""
    it = iter(estimates)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("nothing to merge") from None
    for e in it:
        acc = acc.merge(e)
    return acc
