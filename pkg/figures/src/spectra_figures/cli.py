"""Command line entry point: render figures from a JSON spec file.

The spec file is either one figure object or ``{"figures": [...]}``. Each
object carries ``kind``, ``csv`` (path or list of paths, relative to the
spec file), ``out`` (image filename) and optional ``xlabel`` / ``ylabel`` /
``title``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .render import FigureSpec, SchemaError, render


def load_specs(spec_path: Path, out_dir: Path) -> list[FigureSpec]:
    document = json.loads(Path(spec_path).read_text(encoding="utf-8"))
    entries = document.get("figures", [document]) \
        if isinstance(document, dict) else document
    base = Path(spec_path).resolve().parent
    specs = []
    for entry in entries:
        if "kind" not in entry or "csv" not in entry or "out" not in entry:
            raise SchemaError("each figure needs kind, csv and out fields")
        raw = entry["csv"]
        paths = [base / p for p in ([raw] if isinstance(raw, str) else raw)]
        specs.append(FigureSpec(
            kind=entry["kind"], csv_paths=paths,
            output_path=Path(out_dir) / entry["out"],
            xlabel=entry.get("xlabel", ""), ylabel=entry.get("ylabel", ""),
            title=entry.get("title", "")))
    return specs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="render figures from channel-spectra CSV outputs")
    parser.add_argument("--spec", required=True, help="JSON figure spec file")
    parser.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        specs = load_specs(Path(args.spec), Path(args.out))
        for spec in specs:
            path = render(spec)
            print(path)
    except (SchemaError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
