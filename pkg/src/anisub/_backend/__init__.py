"""Kernel backend selection.

The hot Monte Carlo loops (one-sided stable variates, first-passage sweeps,
renewal counting) exist twice: a Cython extension compiled at install time
and a vectorized NumPy fallback.  The compiled core is preferred when
importable; set ``ANISUB_BACKEND=python`` (or ``compiled``) to force one.
Both backends are deterministic per ``(seed, stream)`` but are not
bit-identical to each other: they consume the Philox stream in different
orders.  ``benchmarks/bench_backends.py`` compares their throughput.
"""

import os

_forced = os.environ.get("ANISUB_BACKEND", "").strip().lower()

if _forced in ("", "compiled"):
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        from . import _purepy as _impl
        BACKEND = "python"
elif _forced in ("python", "purepy", "numpy"):
    from . import _purepy as _impl
    BACKEND = "python"
else:
    raise RuntimeError(f"unknown ANISUB_BACKEND value {_forced!r}")

standard_stable = _impl.standard_stable
first_passage_pairs = _impl.first_passage_pairs
crossing_grid = _impl.crossing_grid
ctrw_counts = _impl.ctrw_counts

__all__ = ["BACKEND", "standard_stable", "first_passage_pairs",
           "crossing_grid", "ctrw_counts", "get_backend"]


def get_backend(name=None):
    """Return the kernel module for ``name`` (``None`` = the selected one)."""
    if name is None:
        return _impl
    if name == "python":
        from . import _purepy
        return _purepy
    if name == "compiled":
        from . import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")
