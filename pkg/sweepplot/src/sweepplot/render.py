"""Turn a sweep CSV into a static performance figure.

The input schema is the one the sweep tool writes:

    curve,p_s,e_bar,ps_times_ebar,T,theta,monotone,alpha,beta

Everything plotted comes straight from the file; nothing is recomputed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

EXPECTED_HEADER = ["curve", "p_s", "e_bar", "ps_times_ebar", "T", "theta", "monotone", "alpha", "beta"]


class SchemaError(ValueError):
    """The CSV does not match the sweep schema."""


@dataclass
class PlotSpec:
    input_csv: str
    output_path: str
    logx: bool = False
    title: str | None = None


def load_curves(path: str) -> tuple[dict[str, list[tuple[float, float]]], str]:
    """Parse the CSV into per-curve (p_s, e_bar) polylines plus the y label."""
    csv_path = Path(path)
    if not csv_path.is_file():
        raise SchemaError(f"input CSV not found: {path}")
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("input CSV is empty") from None
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"header mismatch: expected {','.join(EXPECTED_HEADER)!r}, got {','.join(header)!r}"
            )
        curves: dict[str, list[tuple[float, float]]] = {}
        monotones: set[str] = set()
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(EXPECTED_HEADER):
                raise SchemaError(f"line {lineno}: expected {len(EXPECTED_HEADER)} fields, got {len(row)}")
            try:
                p_s = float(row[1])
                e_bar = float(row[2])
            except ValueError as exc:
                raise SchemaError(f"line {lineno}: {exc}") from None
            curves.setdefault(row[0], []).append((p_s, e_bar))
            monotones.add(row[6])
    if not curves:
        raise SchemaError("no data rows in input CSV")
    for pts in curves.values():
        pts.sort(key=lambda xy: xy[0])
    return curves, " / ".join(sorted(monotones))


def render(spec: PlotSpec) -> list[str]:
    """Write the figure and return the legend labels, one per curve."""
    curves, ylabel = load_curves(spec.input_csv)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    try:
        for curve_id in sorted(curves):
            xs, ys = zip(*curves[curve_id])
            ax.plot(xs, ys, marker=".", label=curve_id)
        if spec.logx:
            ax.set_xscale("log")
        ax.set_xlabel("P_s")
        ax.set_ylabel(ylabel)
        if spec.title:
            ax.set_title(spec.title)
        ax.grid(True, alpha=0.3)
        legend = ax.legend()
        labels = [text.get_text() for text in legend.get_texts()]
        fig.savefig(spec.output_path, dpi=150)
    finally:
        plt.close(fig)
    return labels
