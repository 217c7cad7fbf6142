"""Experiment runner CLI.

Usage::

    channel-spectra <kind> --config cfg.json [--seed N] [--out DIR] [--jobs K]
    channel-spectra tables --code three_qubit_bitflip --noise none [--out DIR]
    channel-spectra validate --config cfg.json

The config is a single JSON document; command-line flags override leaf
fields.  Every run writes ``manifest.json`` referencing each emitted file
with a SHA-256 checksum; numeric output is fully determined by the config
and seed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .channels import superoperator
from .ensembles import gap_experiment, sample_channel
from .linalg import eigenvalues, singular_values
from .pec import PECConfig, mitigation_experiment
from .qec import (FAILURE_MODES, TABLE_NOISE_MODELS, build_code,
                  qec_experiment, singular_multiplicity_table)

KINDS = ("mitigation", "qec", "ensemble", "spectrum", "tables")

SCHEMA_VERSION = 1

DEFAULT_OUT_ENV = "CHANNEL_SPECTRA_OUT"


class ConfigError(ValueError):
    """Raised with a field-level message for invalid configs."""


def _check(cond: bool, field: str, message: str):
    if not cond:
        raise ConfigError(f"{field}: {message}")


def validate_config(config: dict) -> dict:
    """Schema and range checks; returns the config on success."""
    _check(isinstance(config, dict), "<root>", "config must be a JSON object")
    kind = config.get("kind")
    _check(kind in KINDS, "kind", f"must be one of {KINDS}, got {kind!r}")
    _check("seed" in config, "seed",
           "mandatory (runs must be reproducible, no wall-clock default)")
    _check(isinstance(config["seed"], int), "seed", "must be an integer")
    params = config.get("params", {})
    _check(isinstance(params, dict), "params", "must be an object")

    if kind == "mitigation":
        _check(params.get("sweep") in ("kappa", "epsilon", "alpha"),
               "params.sweep", "must be kappa, epsilon or alpha")
        _check(isinstance(params.get("values"), list) and params["values"],
               "params.values", "must be a nonempty list")
        n = params.get("n", 3)
        _check(1 <= n <= 5, "params.n", "must lie in [1, 5]")
        _check(params.get("kappa", 320) >= 1, "params.kappa", "must be >= 1")
        _check(params.get("epsilon", 0.0) >= 0, "params.epsilon",
               "must be nonnegative")
        _check(0 <= params.get("alpha", 0.0) <= 1, "params.alpha",
               "must lie in [0, 1]")
        _check(params.get("ensemble_size", 100) >= 1, "params.ensemble_size",
               "must be >= 1")
    elif kind == "qec":
        _check("code" in params, "params.code", "is required")
        _check(params.get("failure") in FAILURE_MODES, "params.failure",
               f"must be one of {FAILURE_MODES}")
        _check(params.get("rounds", 25) >= 1, "params.rounds", "must be >= 1")
        grid = params.get("eps_grid", [])
        _check(isinstance(grid, list) and grid, "params.eps_grid",
               "must be a nonempty list")
        for e in grid:
            _check(0 <= e <= 1, "params.eps_grid",
                   f"entries must lie in [0, 1], got {e}")
        _check(params.get("ensemble_size", 50) >= 1, "params.ensemble_size",
               "must be >= 1")
    elif kind == "ensemble":
        _check(params.get("family") in ("unitary", "kraus", "pauli"),
               "params.family", "must be unitary, kraus or pauli")
        grid = params.get("kappa_grid", [])
        _check(isinstance(grid, list) and grid, "params.kappa_grid",
               "must be a nonempty list")
        _check(params.get("trials", 100) >= 1, "params.trials", "must be >= 1")
        _check(params.get("d", 8) >= 2, "params.d", "must be >= 2")
    elif kind == "spectrum":
        _check(params.get("family") in ("unitary", "kraus", "pauli"),
               "params.family", "must be unitary, kraus or pauli")
        _check(params.get("kappa", 15) >= 1, "params.kappa", "must be >= 1")
        _check(params.get("d", 8) >= 2, "params.d", "must be >= 2")
    elif kind == "tables":
        _check("code" in params, "params.code", "is required")
        _check(params.get("noise", "none") in TABLE_NOISE_MODELS,
               "params.noise", f"must be one of {TABLE_NOISE_MODELS}")
        _check(0 <= params.get("strength", 1.0) <= 1, "params.strength",
               "must lie in [0, 1]")
    return config


# ---------------------------------------------------------------------------
# output plumbing

def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: Path, columns: list[str], rows: list[dict]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out_dir: Path, config: dict, files: list[Path],
                   wall_time: float, partial: bool = False):
    manifest = {
        "artifact_version": __version__,
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "wall_time_seconds": wall_time,
        "partial": partial,
        "files": [{"name": f.name, "sha256": _sha256(f)} for f in files],
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def format_table(clusters: list[tuple[float, int]]) -> str:
    """Published-table layout: one 'value, m=count' line per cluster, 3 s.f."""
    lines = [f"{value:#.3g}".rstrip(".") + f", m={count}"
             for value, count in clusters]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# pipelines

def _run_mitigation(config: dict, out_dir: Path) -> list[Path]:
    p = config["params"]
    pec_config = PECConfig(
        circuit=p.get("circuit", "identity"), n=p.get("n", 3),
        layers=p.get("layers", 3), kappa=p.get("kappa", 320),
        epsilon=p.get("epsilon", 0.0), alpha=p.get("alpha", 0.0),
        ensemble_size=p.get("ensemble_size", 100), seed=config["seed"],
        noise=p.get("noise", None) or dict(PECConfig().noise))
    result = mitigation_experiment(pec_config, p["sweep"], p["values"])
    path = out_dir / f"mitigation_{p['sweep']}_sweep.csv"
    write_csv(path, result.columns, result.rows)
    return [path]


def _run_qec(config: dict, out_dir: Path) -> list[Path]:
    p = config["params"]
    code = build_code(p["code"])
    result = qec_experiment(
        code, p["failure"], p.get("rounds", 25), p["eps_grid"],
        p.get("ensemble_size", 50), config["seed"],
        damping_strength=p.get("damping_strength", 1.0),
        per_trial_failure=p.get("per_trial_failure", False))
    path = out_dir / f"qec_{p['failure']}_sweep.csv"
    write_csv(path, result.columns, result.rows)
    return [path]


def _run_ensemble(config: dict, out_dir: Path) -> list[Path]:
    p = config["params"]
    reports = gap_experiment(p["family"], p["kappa_grid"], p.get("d", 8),
                             p.get("trials", 100), config["seed"],
                             theta=p.get("theta", 1.0))
    columns = ["family", "kappa", "gamma_lambda_mean", "gamma_lambda_std",
               "gamma_sigma_mean", "gamma_sigma_std", "sigma2_mean",
               "lambda2_mean", "nilpotent_radius_mean", "mu_upper",
               "mu_lower", "bound_upper", "bound_lower"]
    rows = [{c: getattr(r, c) for c in columns} for r in reports]
    path = out_dir / f"ensemble_{p['family']}_gaps.csv"
    write_csv(path, columns, rows)
    return [path]


def _run_spectrum(config: dict, out_dir: Path) -> list[Path]:
    p = config["params"]
    rng = np.random.default_rng(config["seed"])
    ch = sample_channel(p["family"], p.get("d", 8), p.get("kappa", 15), rng)
    M = superoperator(ch).matrix
    evals = eigenvalues(M)
    svals = singular_values(M)
    columns = ["index", "eigen_re", "eigen_im", "singular"]
    rows = [{"index": i, "eigen_re": float(e.real),
             "eigen_im": float(e.imag), "singular": float(s)}
            for i, (e, s) in enumerate(zip(evals, svals), start=1)]
    path = out_dir / f"spectrum_{p['family']}.csv"
    write_csv(path, columns, rows)
    return [path]


def _run_tables(config: dict, out_dir: Path) -> list[Path]:
    p = config["params"]
    code = build_code(p["code"])
    clusters = singular_multiplicity_table(
        code, p.get("noise", "none"), p.get("strength", 1.0),
        no_code=p.get("no_code", False))
    txt = out_dir / "table.txt"
    txt.write_text(format_table(clusters), encoding="utf-8")
    columns = ["singular_value", "multiplicity"]
    rows = [{"singular_value": v, "multiplicity": c} for v, c in clusters]
    path = out_dir / "table.csv"
    write_csv(path, columns, rows)
    return [txt, path]


_RUNNERS = {
    "mitigation": _run_mitigation,
    "qec": _run_qec,
    "ensemble": _run_ensemble,
    "spectrum": _run_spectrum,
    "tables": _run_tables,
}


def run(config: dict, out_dir: Path) -> list[Path]:
    """Validate, execute and manifest one experiment config."""
    validate_config(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.monotonic()
    try:
        files = _RUNNERS[config["kind"]](config, out_dir)
    except Exception:
        write_manifest(out_dir, config, [], time.monotonic() - start,
                       partial=True)
        raise
    write_manifest(out_dir, config, files, time.monotonic() - start)
    return files


# ---------------------------------------------------------------------------
# argument parsing

def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: unreadable file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON: {exc}") from exc


def _apply_overrides(config: dict, args) -> dict:
    if args.seed is not None:
        config["seed"] = args.seed
    for item in args.set or []:
        key, _, raw = item.partition("=")
        if not _:
            raise ConfigError(f"--set {item!r}: expected key=value")
        node = config
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = json.loads(raw)
    return config


def _out_dir(args, config: dict) -> Path:
    if args.out:
        return Path(args.out)
    if config.get("output_dir"):
        return Path(config["output_dir"])
    return Path(os.environ.get(DEFAULT_OUT_ENV, "out"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="channel-spectra",
        description="Spectral experiments on noisy quantum channels")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="path to a JSON config")
        sp.add_argument("--seed", type=int, help="override the master seed")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--jobs", type=int, default=1,
                        help="worker count (execution is currently serial)")
        sp.add_argument("--set", action="append", metavar="KEY=JSON",
                        help="override a config leaf, e.g. params.kappa=80")

    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} experiment")
        common(sp)
        if kind == "tables":
            sp.add_argument("--code", help="code name")
            sp.add_argument("--noise", default="none",
                            choices=TABLE_NOISE_MODELS)
            sp.add_argument("--strength", type=float, default=1.0)
            sp.add_argument("--no-code", action="store_true",
                            help="analyze the bare noise channel")

    sp = sub.add_parser("validate", help="check a config without executing")
    sp.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            validate_config(_load_config(args.config))
            print("config OK")
            return 0
        if args.config:
            config = _load_config(args.config)
        elif args.command == "tables" and args.code:
            config = {"kind": "tables", "seed": args.seed or 0,
                      "params": {"code": args.code, "noise": args.noise,
                                 "strength": args.strength,
                                 "no_code": args.no_code}}
        else:
            raise ConfigError("config: --config is required")
        if config.get("kind") != args.command:
            config["kind"] = args.command
        config = _apply_overrides(config, args)
        if args.jobs is not None and args.jobs < 1:
            raise ConfigError("jobs: must be >= 1")
        out_dir = _out_dir(args, config)
        files = run(config, out_dir)
        for f in files:
            print(f)
        if args.command == "tables":
            sys.stdout.write((out_dir / "table.txt").read_text())
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numeric/pipeline failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
