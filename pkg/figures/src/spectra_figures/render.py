"""Render figures from channel-spectra CSV/manifest output directories.

Every renderer is a pure function of the CSV content: fixed figure size,
fixed colors, no timestamps. Re-rendering the same inputs with the same
library versions reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = ("sweep", "scatter", "multiplicity", "gap")

# columns each kind must find in its CSV; anything missing is schema drift
REQUIRED_COLUMNS = {
    "sweep": ("value", "sigma1_mean", "lambda1_mean", "mu", "bound"),
    "scatter": ("index", "eigen_re", "eigen_im", "singular"),
    "multiplicity": ("eps_prime", "mult_lambda_one", "mult_sigma_one",
                     "mult_sigma_g"),
    "gap": ("kappa", "sigma2_mean", "lambda2_mean", "bound_upper",
            "bound_lower"),
}


class SchemaError(ValueError):
    """CSV does not match the expected channel-spectra contract."""


@dataclass
class FigureSpec:
    kind: str
    csv_paths: list[Path]
    output_path: Path
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")
        self.csv_paths = [Path(p) for p in self.csv_paths]
        self.output_path = Path(self.output_path)
        if not self.csv_paths:
            raise SchemaError("at least one input CSV is required")


@dataclass
class Table:
    """A parsed CSV with float columns where possible."""

    path: Path
    columns: list[str]
    data: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[name]


def load_table(path: Path, required: tuple[str, ...]) -> Table:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        rows = list(reader)
    missing = [c for c in required if c not in columns]
    if missing:
        raise SchemaError(f"{path.name}: missing columns {missing}")
    if not rows:
        raise SchemaError(f"{path.name}: no data rows")
    data = {}
    for col in columns:
        raw = [row[col] for row in rows]
        try:
            data[col] = np.array([float(v) for v in raw])
        except ValueError:
            data[col] = np.array(raw)
    return Table(path=path, columns=list(columns), data=data)


def manifest_checksum(csv_path: Path) -> str:
    """Short sha256 of the CSV as recorded by the producing run's manifest."""
    csv_path = Path(csv_path)
    manifest_path = csv_path.parent / "manifest.json"
    if not manifest_path.exists():
        raise SchemaError(f"no manifest.json next to {csv_path.name}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    for entry in manifest.get("files", []):
        if entry.get("name") == csv_path.name:
            return entry["sha256"][:12]
    raise SchemaError(f"{csv_path.name} not referenced by its manifest")


def _annotate(fig, specs: FigureSpec) -> None:
    tags = ", ".join(manifest_checksum(p) for p in specs.csv_paths)
    fig.text(0.99, 0.01, f"sha256 {tags}", ha="right", va="bottom",
             fontsize=6, color="0.5", family="monospace")


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=150)
    if spec.xlabel:
        ax.set_xlabel(spec.xlabel)
    if spec.ylabel:
        ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax


def _render_sweep(spec: FigureSpec, ax) -> None:
    for path in spec.csv_paths:
        t = load_table(path, REQUIRED_COLUMNS["sweep"])
        x = t["value"]
        ax.plot(x, t["sigma1_mean"], "o-", color="tab:red",
                label=r"mean $\sigma_1$")
        ax.plot(x, t["lambda1_mean"], "s-", color="tab:blue",
                label=r"mean $|\lambda_1|$")
        ax.plot(x, t["mu"], "^--", color="0.4", label=r"fluctuation $\mu$")
        ax.plot(x, t["bound"], "v:", color="0.6", label="expectation bound")
    ax.axhline(1.0, color="0.8", lw=0.8, zorder=0)
    ax.legend(fontsize=8)


def _render_scatter(spec: FigureSpec, ax) -> None:
    theta = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(theta), np.sin(theta), color="0.8", lw=0.8, zorder=0)
    for path in spec.csv_paths:
        t = load_table(path, REQUIRED_COLUMNS["scatter"])
        ax.scatter(t["eigen_re"], t["eigen_im"], s=12, color="tab:blue",
                   label="eigenvalues")
        ax.scatter(t["singular"], np.zeros_like(t["singular"]), s=20,
                   marker="x", color="tab:red", label="singular values")
    ax.set_aspect("equal")
    ax.legend(fontsize=8, loc="upper left")


def _render_multiplicity(spec: FigureSpec, ax) -> None:
    series = [("mult_lambda_one", r"mult $|\lambda|\approx 1$", "tab:blue"),
              ("mult_sigma_one", r"mult $\sigma\approx 1$", "tab:red"),
              ("mult_sigma_g", r"mult $\sigma\approx g$", "tab:green")]
    for path in spec.csv_paths:
        t = load_table(path, REQUIRED_COLUMNS["multiplicity"])
        for col, label, color in series:
            ax.plot(t["eps_prime"], t[col], "o-", color=color, label=label)
    ax.legend(fontsize=8)


def _render_gap(spec: FigureSpec, ax) -> None:
    for path in spec.csv_paths:
        t = load_table(path, REQUIRED_COLUMNS["gap"])
        x = t["kappa"]
        ax.plot(x, t["sigma2_mean"], "o-", color="tab:red",
                label=r"mean $\sigma_2$")
        ax.plot(x, t["lambda2_mean"], "s-", color="tab:blue",
                label=r"mean $|\lambda_2|$")
        ax.plot(x, t["bound_upper"], "^--", color="0.4", label="upper bound")
        ax.plot(x, t["bound_lower"], "v--", color="0.6", label="lower bound")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.legend(fontsize=8)


_RENDERERS = {
    "sweep": _render_sweep,
    "scatter": _render_scatter,
    "multiplicity": _render_multiplicity,
    "gap": _render_gap,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure and return the written image path."""
    fig, ax = _new_axes(spec)
    try:
        _RENDERERS[spec.kind](spec, ax)
        _annotate(fig, spec)
        spec.output_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output_path)
    finally:
        plt.close(fig)
    return spec.output_path
