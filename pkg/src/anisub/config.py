"""Run configuration: an INI-style text file with one model block and one
section of parameters per command.  A run is reproducible from its config
file and seed alone.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import ConfigError
from .models import (BivariateModel, CommonFactor, IndependentStable,
                     SpectralMeasure, SpectralStable, StableTerm)

__all__ = ["RunConfig", "parse_config", "parse_config_text", "DEFAULT_CONFIG_TEXT"]

DEFAULT_CONFIG_TEXT = """\
[model]
variant = spectral-stable
alpha = 0.5
c = standard
atoms = pi/4:1.0

[run]
seed = 42
threads = 1
format = ndjson

[simulate]
x_max = 1.0
dx = 0.01
n_paths = 1

[invert]
t1 = 1.0
t2 = 1.0
dx = 0.01
n_reps = 1000
truncation_tolerance = 0.0

[subdiffuse]
t_grid = 1 2 4 8
dx = 0.01
n_trajectories = 1

[poisson]
xi1 = 1.0
xi2 = 1.0
t1 = 1.0
t2 = 1.0
dx = 0.01
n_reps = 1000

[ctmc]
states1 = 0 1
states2 = 0 1
a = 0.5 0.5 ; 0.5 0.5
b = 0.5 0.5 ; 0.5 0.5
xi1 = 1.0
xi2 = 1.0
t1 = 1.0
t2 = 1.0
dx = 0.01
n_reps = 1000

[ctrw-sweep]
c_values = 10 100 1000 10000
t_eval = 1.0
n_reps = 10000
dx = 0.005

[verify]
suite = all
budget = 100000
z_max = 4.0
"""

_ANGLES = {"0": 0.0, "pi/2": math.pi / 2, "pi/3": math.pi / 3,
           "pi/4": math.pi / 4, "pi/6": math.pi / 6}


def _angle(field_name: str, token: str) -> float:
    token = token.strip()
    if token in _ANGLES:
        return _ANGLES[token]
    try:
        return float(token)
    except ValueError:
        raise ConfigError(field_name, f"cannot parse angle {token!r}") from None


def _get(section, key, cast, default=None, field_name=None):
    field_name = field_name or f"{section.name}.{key}"
    if key not in section:
        if default is None:
            raise ConfigError(field_name, "missing required key")
        return default
    raw = section[key].strip()
    try:
        return cast(raw)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(field_name, f"cannot parse {raw!r}: {exc}") from None


def _floats(raw: str):
    return [float(tok) for tok in raw.replace(",", " ").split()]


def _matrix(raw: str) -> np.ndarray:
    return np.asarray([[float(x) for x in row.split()]
                       for row in raw.split(";")], dtype=float)


def _build_model(cp: configparser.ConfigParser) -> BivariateModel:
    sec = cp["model"]
    variant = _get(sec, "variant", str, "spectral-stable")
    alpha = _get(sec, "alpha", float, 0.5)
    if not 0.0 < alpha < 1.0:
        raise ConfigError("model.alpha", f"must lie in (0, 1), got {alpha}")
    if variant == "spectral-stable":
        c_raw = _get(sec, "c", str, "standard")
        c = None if c_raw == "standard" else float(c_raw)
        has_density = any(k in sec for k in ("density_nodes", "density_weights",
                                             "density_values"))
        default_atoms = "" if has_density else "pi/4:1.0"
        atoms = []
        for tok in _get(sec, "atoms", str, default_atoms).split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                angle_tok, weight_tok = tok.rsplit(":", 1)
            except ValueError:
                raise ConfigError("model.atoms",
                                  f"expected angle:weight, got {tok!r}") from None
            atoms.append((_angle("model.atoms", angle_tok), float(weight_tok)))
        density = {}
        for key in ("density_nodes", "density_weights", "density_values"):
            if key in sec:
                density[key] = tuple(_floats(sec[key]))
        try:
            m = SpectralMeasure(atoms=tuple(atoms), **density)
            return SpectralStable(alpha, m, c=c)
        except ValueError as exc:
            raise ConfigError("model", str(exc)) from None
    if variant == "independent-stable":
        try:
            return IndependentStable(alpha,
                                     _get(sec, "scale1", float, 1.0),
                                     _get(sec, "scale2", float, 1.0))
        except ValueError as exc:
            raise ConfigError("model", str(exc)) from None
    if variant == "common-factor":
        try:
            return CommonFactor(
                StableTerm(_get(sec, "alpha1", float, alpha),
                           _get(sec, "scale1", float, 1.0)),
                StableTerm(_get(sec, "alpha2", float, alpha),
                           _get(sec, "scale2", float, 1.0)),
                StableTerm(_get(sec, "alpha_shared", float, alpha),
                           _get(sec, "scale_shared", float, 1.0)),
                c1=_get(sec, "c1", float, 1.0),
                c2=_get(sec, "c2", float, 1.0))
        except ValueError as exc:
            raise ConfigError("model", str(exc)) from None
    raise ConfigError("model.variant", f"unknown variant {variant!r}")


@dataclass
class RunConfig:
    """Validated configuration for one CLI run."""

    model: BivariateModel
    seed: int = 42
    threads: int = 1
    fmt: str = "ndjson"
    sections: Dict[str, Dict[str, object]] = field(default_factory=dict)
    text: str = DEFAULT_CONFIG_TEXT

    def params(self, command: str) -> Dict[str, object]:
        return self.sections.get(command, {})


def _positive(field_name, value, kind=float):
    value = kind(value)
    if not value > 0:
        raise ConfigError(field_name, f"must be positive, got {value}")
    return value


def _parse_sections(cp: configparser.ConfigParser) -> Dict[str, Dict[str, object]]:
    out: Dict[str, Dict[str, object]] = {}
    if "simulate" in cp:
        s = cp["simulate"]
        out["simulate"] = {
            "x_max": _positive("simulate.x_max", _get(s, "x_max", float, 1.0)),
            "dx": _positive("simulate.dx", _get(s, "dx", float, 0.01)),
            "n_paths": int(_positive("simulate.n_paths", _get(s, "n_paths", int, 1), int)),
        }
    if "invert" in cp:
        s = cp["invert"]
        tol = _get(s, "truncation_tolerance", float, 0.0)
        if not 0.0 <= tol <= 1.0:
            raise ConfigError("invert.truncation_tolerance", "must lie in [0, 1]")
        out["invert"] = {
            "t1": _get(s, "t1", float, 1.0),
            "t2": _get(s, "t2", float, 1.0),
            "dx": _positive("invert.dx", _get(s, "dx", float, 0.01)),
            "n_reps": int(_positive("invert.n_reps", _get(s, "n_reps", int, 1000), int)),
            "max_cells": int(_positive("invert.max_cells",
                                       _get(s, "max_cells", int, 1 << 21), int)),
            "truncation_tolerance": tol,
        }
    if "subdiffuse" in cp:
        s = cp["subdiffuse"]
        grid = _get(s, "t_grid", _floats, [1.0, 2.0, 4.0, 8.0])
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] <= 0:
            raise ConfigError("subdiffuse.t_grid",
                              "must be positive and strictly increasing")
        out["subdiffuse"] = {
            "t_grid": grid,
            "dx": _positive("subdiffuse.dx", _get(s, "dx", float, 0.01)),
            "n_trajectories": int(_positive("subdiffuse.n_trajectories",
                                            _get(s, "n_trajectories", int, 1), int)),
        }
    if "poisson" in cp:
        s = cp["poisson"]
        out["poisson"] = {
            "xi1": _positive("poisson.xi1", _get(s, "xi1", float, 1.0)),
            "xi2": _positive("poisson.xi2", _get(s, "xi2", float, 1.0)),
            "t1": _get(s, "t1", float, 1.0),
            "t2": _get(s, "t2", float, 1.0),
            "dx": _positive("poisson.dx", _get(s, "dx", float, 0.01)),
            "n_reps": int(_positive("poisson.n_reps", _get(s, "n_reps", int, 1000), int)),
        }
    if "ctmc" in cp:
        s = cp["ctmc"]
        out["ctmc"] = {
            "states1": _get(s, "states1", _floats, [0.0, 1.0]),
            "states2": _get(s, "states2", _floats, [0.0, 1.0]),
            "a": _get(s, "a", _matrix, np.full((2, 2), 0.5)),
            "b": _get(s, "b", _matrix, np.full((2, 2), 0.5)),
            "xi1": _positive("ctmc.xi1", _get(s, "xi1", float, 1.0)),
            "xi2": _positive("ctmc.xi2", _get(s, "xi2", float, 1.0)),
            "t1": _get(s, "t1", float, 1.0),
            "t2": _get(s, "t2", float, 1.0),
            "dx": _positive("ctmc.dx", _get(s, "dx", float, 0.01)),
            "n_reps": int(_positive("ctmc.n_reps", _get(s, "n_reps", int, 1000), int)),
        }
    if "ctrw-sweep" in cp:
        s = cp["ctrw-sweep"]
        out["ctrw-sweep"] = {
            "c_values": _get(s, "c_values", _floats, [10.0, 100.0, 1000.0, 10000.0]),
            "t_eval": _positive("ctrw-sweep.t_eval", _get(s, "t_eval", float, 1.0)),
            "n_reps": int(_positive("ctrw-sweep.n_reps", _get(s, "n_reps", int, 10000), int)),
            "dx": _positive("ctrw-sweep.dx", _get(s, "dx", float, 0.005)),
        }
    if "verify" in cp:
        s = cp["verify"]
        suite_raw = _get(s, "suite", str, "all")
        suite = None if suite_raw.strip() == "all" else \
            [tok.strip() for tok in suite_raw.split(",") if tok.strip()]
        out["verify"] = {
            "suite": suite,
            "budget": int(_positive("verify.budget", _get(s, "budget", int, 100_000), int)),
            "z_max": _positive("verify.z_max", _get(s, "z_max", float, 4.0)),
        }
    return out


_COMMAND_SECTIONS = ("simulate", "invert", "subdiffuse", "poisson", "ctmc",
                     "ctrw-sweep", "verify")


def parse_config_text(text: str) -> RunConfig:
    # only '#' starts an inline comment: ';' is the matrix row separator
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("(file)", f"INI syntax error: {exc}") from None
    for name in _COMMAND_SECTIONS + ("model",):
        if not cp.has_section(name):
            cp.add_section(name)
    model = _build_model(cp)
    run = cp["run"] if "run" in cp else cp["DEFAULT"]
    seed = _get(run, "seed", int, 42, field_name="run.seed")
    if not 0 <= seed < 1 << 64:
        raise ConfigError("run.seed", "must be an unsigned 64-bit integer")
    threads = _get(run, "threads", int, 1, field_name="run.threads")
    if threads < 1:
        raise ConfigError("run.threads", "must be at least 1")
    fmt = _get(run, "format", str, "ndjson", field_name="run.format")
    if fmt not in ("csv", "ndjson"):
        raise ConfigError("run.format", f"must be csv or ndjson, got {fmt!r}")
    return RunConfig(model=model, seed=seed, threads=threads, fmt=fmt,
                     sections=_parse_sections(cp), text=text)


def parse_config(path: Optional[str]) -> RunConfig:
    """Load a config file; ``None`` selects the built-in defaults."""
    if path is None:
        return parse_config_text(DEFAULT_CONFIG_TEXT)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())
