"""Batch entry point.

One command per run; every command writes into its output directory a copy
of the effective configuration (``config.echo``), run metadata
(``meta.json``) and its data files.  Outputs are deterministic given the
configuration and seed.

Exit codes: 0 success (and, for ``verify``, all identities passed),
1 verification failure, 2 configuration error, 3 truncation budget
exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, _backend, ctrw, inverse, simulate, timechange, verify
from .config import RunConfig, parse_config
from .errors import ConfigError, DomainError, TruncationBudgetError
from .models import SpectralStable
from .rng import RngSpec, stream_id
from .timechange import CTMCSpec

COMMANDS = ("simulate", "invert", "subdiffuse", "poisson", "ctmc",
            "ctrw-sweep", "verify")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_TRUNCATION = 3


def _spec_of(cfg: RunConfig) -> SpectralStable:
    if isinstance(cfg.model, SpectralStable):
        return cfg.model
    raise ConfigError("model.variant",
                      "this command needs a spectral-stable model")


def _cmd_simulate(cfg, out_dir, rng_spec):
    p = cfg.params("simulate")
    files = []
    for i in range(p["n_paths"]):
        path = simulate.sample_path(cfg.model, p["x_max"], p["dx"],
                                    rng_spec.substream(i))
        name = f"path_{i:03d}.csv"
        with open(out_dir / name, "w", encoding="utf-8") as fh:
            simulate.write_path_csv(path, fh)
        files.append(name)
    return EXIT_OK, files


def _cmd_invert(cfg, out_dir, rng_spec):
    p = cfg.params("invert")
    l1, l2, diag, trunc = inverse.sample_inverse_batch(
        cfg.model, np.full(p["n_reps"], p["t1"]), np.full(p["n_reps"], p["t2"]),
        p["dx"], rng_spec, p["max_cells"])
    name = "samples.ndjson" if cfg.fmt == "ndjson" else "samples.csv"
    with open(out_dir / name, "w", encoding="utf-8") as fh:
        if cfg.fmt == "ndjson":
            inverse.write_samples_ndjson(l1, l2, diag, trunc, fh)
        else:
            fh.write("l1,l2,on_diagonal,truncated\n")
            for a, b, d, tr in zip(l1, l2, diag, trunc):
                fh.write(f"{float(a)!r},{float(b)!r},{int(d)},{int(tr)}\n")
    frac = float(trunc.mean())
    if frac > p["truncation_tolerance"]:
        raise TruncationBudgetError(
            f"truncated fraction {frac:.3g} exceeds tolerance "
            f"{p['truncation_tolerance']:.3g}")
    return EXIT_OK, [name]


def _cmd_subdiffuse(cfg, out_dir, rng_spec):
    spec = _spec_of(cfg)
    p = cfg.params("subdiffuse")
    files = []
    for i in range(p["n_trajectories"]):
        points = timechange.sample_subdiffusion(
            spec.alpha, spec.m, p["t_grid"], p["dx"], rng_spec.substream(i))
        name = f"trajectory_{i:03d}.csv"
        with open(out_dir / name, "w", encoding="utf-8") as fh:
            timechange.write_trajectory_csv(points, fh)
        files.append(name)
    return EXIT_OK, files


def _cmd_poisson(cfg, out_dir, rng_spec):
    spec = _spec_of(cfg)
    p = cfg.params("poisson")
    n1, n2 = timechange.sample_bifrac_poisson_batch(
        p["xi1"], p["xi2"], spec.alpha, spec.m, p["t1"], p["t2"],
        p["n_reps"], rng_spec, dx=p["dx"])
    name = "counts.ndjson" if cfg.fmt == "ndjson" else "counts.csv"
    with open(out_dir / name, "w", encoding="utf-8") as fh:
        if cfg.fmt == "ndjson":
            timechange.write_counts_ndjson(p["t1"], p["t2"], n1, n2, fh)
        else:
            fh.write("t1,t2,n1,n2\n")
            for a, b in zip(n1, n2):
                fh.write(f"{p['t1']!r},{p['t2']!r},{int(a)},{int(b)}\n")
    return EXIT_OK, [name]


def _cmd_ctmc(cfg, out_dir, rng_spec):
    p = cfg.params("ctmc")
    spec = CTMCSpec(states1=tuple(p["states1"]), states2=tuple(p["states2"]),
                    a=p["a"], b=p["b"], xi1=p["xi1"], xi2=p["xi2"])
    s1, s2 = timechange.sample_ctmc_batch(
        spec, cfg.model, p["t1"], p["t2"], p["n_reps"], rng_spec, dx=p["dx"])
    name = "states.ndjson" if cfg.fmt == "ndjson" else "states.csv"
    with open(out_dir / name, "w", encoding="utf-8") as fh:
        if cfg.fmt == "ndjson":
            for a, b in zip(s1, s2):
                fh.write(json.dumps({"t1": p["t1"], "t2": p["t2"],
                                     "x1": spec.states1[int(a)],
                                     "x2": spec.states2[int(b)]}) + "\n")
        else:
            fh.write("t1,t2,x1,x2\n")
            for a, b in zip(s1, s2):
                fh.write(f"{p['t1']!r},{p['t2']!r},"
                         f"{spec.states1[int(a)]!r},{spec.states2[int(b)]!r}\n")
    return EXIT_OK, [name]


def _cmd_ctrw_sweep(cfg, out_dir, rng_spec):
    spec_model = _spec_of(cfg)
    p = cfg.params("ctrw-sweep")
    walk = ctrw.CTRWSpec(spec_model.alpha, spec_model.m)
    exp = ctrw.ScalingExperiment(c_values=tuple(p["c_values"]),
                                 t_eval=p["t_eval"], n_reps=p["n_reps"],
                                 dx=p["dx"])
    result = ctrw.convergence_sweep(walk, exp, rng_spec)
    with open(out_dir / "sweep.csv", "w", encoding="utf-8") as fh:
        ctrw.write_sweep_csv(result, fh)
    return EXIT_OK, ["sweep.csv"]


def _cmd_verify(cfg, out_dir, rng_spec):
    p = cfg.params("verify")
    verdicts = verify.run_identity_suite(
        model=cfg.model, suite=p["suite"], budget=p["budget"],
        seed=rng_spec.seed, workers=cfg.threads, z_max=p["z_max"])
    with open(out_dir / "verdicts.ndjson", "w", encoding="utf-8") as fh:
        verify.write_verdicts_ndjson(verdicts, fh)
    ok = verify.all_passed(verdicts)
    n_fail = sum(not v.passed for v in verdicts)
    print(f"{len(verdicts)} verdicts, {n_fail} failed")
    return (EXIT_OK if ok else EXIT_VERIFY_FAILED), ["verdicts.ndjson"]


_HANDLERS = {
    "simulate": _cmd_simulate,
    "invert": _cmd_invert,
    "subdiffuse": _cmd_subdiffuse,
    "poisson": _cmd_poisson,
    "ctmc": _cmd_ctmc,
    "ctrw-sweep": _cmd_ctrw_sweep,
    "verify": _cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anisub",
        description="Bivariate subordinator simulation and identity verification")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="config file path")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="worker pool size")
        p.add_argument("--format", choices=("csv", "ndjson"), default=None)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.time()
    try:
        cfg = parse_config(args.config)
        seed_source = "config"
        if args.seed is not None:
            if not 0 <= args.seed < 1 << 64:
                raise ConfigError("run.seed", "must be an unsigned 64-bit integer")
            cfg.seed, seed_source = args.seed, "flag"
        env_seed = os.environ.get("ANISUB_SEED")
        if env_seed is not None:
            try:
                value = int(env_seed)
            except ValueError:
                raise ConfigError("run.seed",
                                  f"ANISUB_SEED is not an integer: {env_seed!r}") from None
            if not 0 <= value < 1 << 64:
                raise ConfigError("run.seed",
                                  "ANISUB_SEED must be an unsigned 64-bit integer")
            cfg.seed, seed_source = value, "env"
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("run.threads", "must be at least 1")
            cfg.threads = args.threads
        if args.format is not None:
            cfg.fmt = args.format
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = Path(args.out) if args.out else Path(f"anisub-{args.command}-out")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.echo").write_text(cfg.text, encoding="utf-8")

    rng_spec = RngSpec(cfg.seed, stream_id(f"cli.{args.command}"))
    try:
        code, files = _HANDLERS[args.command](cfg, out_dir, rng_spec)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationBudgetError as exc:
        print(f"truncation budget exhausted: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION

    meta = {
        "version": __version__,
        "command": args.command,
        "seed": cfg.seed,
        "seed_source": seed_source,
        "threads": cfg.threads,
        "format": cfg.fmt,
        "backend": _backend.BACKEND,
        "wall_time_s": round(time.time() - started, 3),
        "outputs": files,
    }
    with open(out_dir / "meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
