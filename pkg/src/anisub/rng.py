"""Reproducible random-number streams.

Every stochastic routine draws from a counter-based Philox generator keyed
by a ``(seed, stream)`` pair, so independent substreams need no coordination
between workers: replicate blocks simply use distinct stream numbers.
Identical ``(seed, stream)`` reproduces identical output bit-for-bit on the
same build.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

__all__ = ["RngSpec", "as_generator", "stream_id"]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSpec:
    """A ``(seed, stream)`` address into the Philox counter space."""

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not (0 <= int(v) <= _MASK64):
                raise ValueError(f"{name} must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        # the key must be an explicit uint64 array: a Python list would go
        # through float64 and collapse nearby streams above 2**53
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, offset: int) -> "RngSpec":
        return RngSpec(self.seed, (self.stream + offset) & _MASK64)


def as_generator(rng) -> np.random.Generator:
    """Accept either a Generator or an RngSpec wherever randomness is needed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    raise TypeError(f"expected numpy Generator or RngSpec, got {type(rng).__name__}")


def stream_id(name: str, point: int = 0, block: int = 0) -> int:
    """Stable stream number for a named consumer.

    The name is hashed with CRC-32 so stream layout does not depend on
    registration order; ``point`` and ``block`` index grid points and
    replicate blocks within the consumer.
    """
    if not (0 <= point < 1 << 16) or not (0 <= block < 1 << 16):
        raise ValueError("point and block must fit in 16 bits")
    return (zlib.crc32(name.encode()) << 32 | point << 16 | block) & _MASK64
