"""Render multi-panel figures from expansion-sweep CSV files.

Two styles mirror the verification write-up:

* ``loglog_inverse_error``: 1/E_i against N, both axes logarithmic;
* ``exponent_curves``: log E_i / log eps_N against N (x-axis logarithmic),
  with dashed reference lines at the asymptotic floors 0.5, 1.0, 1.5.

Rendering is a pure function of the CSV content: nothing is recomputed,
resampled, or fitted.  Output format follows the file extension; vector
formats (SVG, PDF) are the default choice for documentation embedding.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

EXPANSION_COLUMNS = ["N", "eps_N", "E0", "E1", "E2", "exp0", "exp1", "exp2"]
EXPONENT_REFERENCE_LINES = (0.5, 1.0, 1.5)
STYLES = ("loglog_inverse_error", "exponent_curves")

# fixed hash salt so identical inputs produce byte-identical SVG output
matplotlib.rcParams["svg.hashsalt"] = "dirnorm-plots"


class SchemaError(ValueError):
    """A CSV input does not carry the expansion-sweep schema."""


@dataclass(frozen=True)
class FigureSpec:
    """Inputs, panel layout, style, and output path of one figure.

    ``rows * cols`` must cover the number of input files; every input must
    exist and carry the expansion-sweep column schema.
    """

    inputs: tuple
    rows: int
    cols: int
    out: str
    style: str = "exponent_curves"

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.style not in STYLES:
            raise SchemaError(f"style must be one of {STYLES}, got {self.style!r}")
        if self.rows < 1 or self.cols < 1 or self.rows * self.cols < len(self.inputs):
            raise SchemaError(
                f"panel grid {self.rows}x{self.cols} cannot hold {len(self.inputs)} inputs")


def load_sweep(path: str) -> dict:
    """Parse one expansion-sweep CSV into column arrays.

    Raises :class:`SchemaError` on a missing file, a wrong header, an empty
    table, or non-numeric cells.
    """
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            rows = [row for row in reader if row]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: empty file, expected header {EXPANSION_COLUMNS}")
    if rows[0] != EXPANSION_COLUMNS:
        raise SchemaError(
            f"{path}: header {rows[0]} does not match the expansion schema "
            f"{EXPANSION_COLUMNS}")
    if len(rows) == 1:
        raise SchemaError(f"{path}: no data rows")
    try:
        data = np.array([[float(cell) for cell in row] for row in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell ({exc})") from exc
    return {name: data[:, k] for k, name in enumerate(EXPANSION_COLUMNS)}


def _draw_panel(ax, table: dict, title: str, style: str):
    n = table["N"]
    if style == "loglog_inverse_error":
        for key, label in (("E0", "1/E0"), ("E1", "1/E1"), ("E2", "1/E2")):
            with np.errstate(divide="ignore"):
                ax.plot(n, 1.0 / table[key], label=label)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_ylabel("1/E")
    else:
        for key in ("exp0", "exp1", "exp2"):
            ax.plot(n, table[key], label=key)
        for ref in EXPONENT_REFERENCE_LINES:
            ax.axhline(ref, linestyle="--", linewidth=0.8, color="gray")
        ax.set_xscale("log")
        ax.set_ylabel("log E / log eps")
    ax.set_xlabel("N")
    ax.set_title(title, fontsize=9)
    ax.legend(fontsize=6)


def render(spec: FigureSpec):
    """Write the figure described by ``spec``; returns the matplotlib Figure.

    All inputs are parsed before any drawing, so a schema failure never
    leaves a partial output file behind.
    """
    tables = [load_sweep(path) for path in spec.inputs]
    fig, axes = plt.subplots(spec.rows, spec.cols,
                             figsize=(3.2 * spec.cols, 2.6 * spec.rows),
                             squeeze=False)
    flat = axes.ravel()
    for ax, path, table in zip(flat, spec.inputs, tables):
        _draw_panel(ax, table, Path(path).stem, spec.style)
    for ax in flat[len(tables):]:
        ax.set_visible(False)
    fig.tight_layout()
    fig.savefig(spec.out, metadata=_stable_metadata(spec.out))
    plt.close(fig)
    return fig


def _stable_metadata(out: str) -> dict | None:
    # strip volatile timestamps so identical inputs give identical bytes
    suffix = Path(out).suffix.lower()
    if suffix == ".svg":
        return {"Date": None}
    if suffix == ".pdf":
        return {"CreationDate": None}
    return None


def _parse_grid(text: str):
    try:
        rows, cols = (int(tok) for tok in text.lower().split("x"))
        return rows, cols
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 3x4, got {text!r}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dirnorm-plot",
        description="multi-panel figures from expansion-sweep CSV files")
    parser.add_argument("--input", action="append", required=True,
                        help="input CSV (repeat once per panel, row-major order)")
    parser.add_argument("--style", choices=STYLES, default="exponent_curves")
    parser.add_argument("--grid", type=_parse_grid, default=None,
                        help="panel layout RxC (default: 1xN)")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    rows, cols = args.grid if args.grid else (1, len(args.input))
    try:
        render(FigureSpec(inputs=tuple(args.input), rows=rows, cols=cols,
                          out=args.out, style=args.style))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
