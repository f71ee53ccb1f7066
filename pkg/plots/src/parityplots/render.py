"""Render error-probability curves from paritylab result CSVs.

Consumes only the documented harness CSV schema; statistics are never
recomputed here. One CSV file is one series (one distribution / one alpha);
the series key labels the legend with the file's query difficulty (dbar) or
its target fraction (alpha). Rendering is a pure function of the CSV contents
and the plot spec: fixed style, fixed output metadata.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

EXPECTED_COLUMNS = [
    "k",
    "dist",
    "dbar",
    "decoder",
    "alpha",
    "n",
    "n_norm",
    "trials",
    "errors",
    "p_hat",
    "stderr",
    "seed",
]

_FLOAT_FIELDS = {"dbar": float, "alpha": float, "n_norm": float, "p_hat": float, "stderr": float}
_INT_FIELDS = {"k": int, "n": int, "trials": int, "errors": int, "seed": int}


class RenderError(ValueError):
    """Input CSVs violate the schema or the plot spec's consistency rules."""


@dataclass
class Series:
    path: str
    k: int
    decoder: str
    dbar: float
    alpha: float
    n: list[int]
    n_norm: list[float]
    p_hat: list[float]
    stderr: list[float]

    def key_value(self, series_key: str) -> float:
        return self.dbar if series_key == "dbar" else self.alpha

    def label(self, series_key: str) -> str:
        if series_key == "dbar":
            return f"dbar = {self.dbar:.3f}"
        return f"alpha = {self.alpha:g}"


@dataclass
class PlotSpec:
    csv_paths: list[str]
    x_mode: str  # "raw" | "norm"
    series_key: str  # "dbar" | "alpha"
    out_path: str

    def __post_init__(self) -> None:
        if not self.csv_paths:
            raise RenderError("at least one input CSV is required")
        if self.x_mode not in ("raw", "norm"):
            raise RenderError(f"x mode must be 'raw' or 'norm', got {self.x_mode!r}")
        if self.series_key not in ("dbar", "alpha"):
            raise RenderError(f"series key must be 'dbar' or 'alpha', got {self.series_key!r}")


@dataclass
class RenderResult:
    """What was drawn, for assertions without pixel inspection."""

    out_path: str
    x_label: str
    y_label: str
    legend_labels: list[str]
    series: list[Series] = field(default_factory=list)


def load_series(path: str) -> Series:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise RenderError(f"{path}: empty file, expected header {EXPECTED_COLUMNS}")
        if header != EXPECTED_COLUMNS:
            missing = [c for c in EXPECTED_COLUMNS if c not in header]
            extra = [c for c in header if c not in EXPECTED_COLUMNS]
            offender = (missing + extra or ["column order"])[0]
            raise RenderError(f"{path}: schema mismatch at column {offender!r}")
        records = []
        for rec in reader:
            row = {}
            for name, value in zip(EXPECTED_COLUMNS, rec):
                if name in _INT_FIELDS:
                    row[name] = int(value)
                elif name in _FLOAT_FIELDS:
                    row[name] = float(value)
                else:
                    row[name] = value
            records.append(row)
    if not records:
        raise RenderError(f"{path}: no data rows")
    for name in ("k", "decoder", "dbar", "alpha", "dist"):
        if len({r[name] for r in records}) != 1:
            raise RenderError(f"{path}: column {name!r} is not constant within one run")
    records.sort(key=lambda r: r["n"])
    return Series(
        path=path,
        k=records[0]["k"],
        decoder=records[0]["decoder"],
        dbar=records[0]["dbar"],
        alpha=records[0]["alpha"],
        n=[r["n"] for r in records],
        n_norm=[r["n_norm"] for r in records],
        p_hat=[r["p_hat"] for r in records],
        stderr=[r["stderr"] for r in records],
    )


def _x_label(spec: PlotSpec, series: list[Series]) -> str:
    if spec.x_mode == "raw":
        return "n"
    if all(s.alpha == 1.0 for s in series):
        return "n*dbar/(k log k)"
    return "n*dbar/(k log(1/delta))"


def render(spec: PlotSpec) -> RenderResult:
    """Draw one error-bar curve per input CSV and write the image."""
    series = [load_series(p) for p in spec.csv_paths]
    if len({s.k for s in series}) != 1:
        raise RenderError(f"input CSVs disagree on column 'k': {[s.k for s in series]}")
    if len({s.decoder for s in series}) != 1:
        raise RenderError(f"input CSVs disagree on column 'decoder': {[s.decoder for s in series]}")
    keys = [s.key_value(spec.series_key) for s in series]
    if len(set(keys)) != len(keys):
        raise RenderError(f"series key {spec.series_key!r} values are not distinct: {keys}")
    series.sort(key=lambda s: s.key_value(spec.series_key))

    x_label = _x_label(spec, series)
    y_label = "estimated error probability"
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    legend_labels = []
    for s in series:
        xs = s.n if spec.x_mode == "raw" else s.n_norm
        label = s.label(spec.series_key)
        legend_labels.append(label)
        ax.errorbar(xs, s.p_hat, yerr=s.stderr, marker="o", markersize=3.5, capsize=2, label=label)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    ax.set_ylim(-0.04, 1.04)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = Path(spec.out_path)
    if out.suffix.lower() == ".png":
        fig.savefig(out, dpi=150, metadata={"Software": "parity-render"})
    elif out.suffix.lower() == ".svg":
        fig.savefig(out, metadata={"Date": None})
    else:
        fig.savefig(out)
    plt.close(fig)
    return RenderResult(
        out_path=str(out),
        x_label=x_label,
        y_label=y_label,
        legend_labels=legend_labels,
        series=series,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="parity-render",
        description="Render error-probability curves from paritylab result CSVs.",
    )
    parser.add_argument("--csv", action="append", required=True, help="input CSV (repeatable)")
    parser.add_argument("--x", choices=("raw", "norm"), required=True, help="x-axis mode")
    parser.add_argument("--series", choices=("dbar", "alpha"), required=True, help="legend key")
    parser.add_argument("--out", required=True, help="output image path (.png, .svg, .pdf)")
    args = parser.parse_args(argv)
    try:
        result = render(PlotSpec(csv_paths=args.csv, x_mode=args.x, series_key=args.series, out_path=args.out))
    except (RenderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result.out_path} ({len(result.series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
