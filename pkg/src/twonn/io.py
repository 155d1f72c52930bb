"""Numeric table ingestion and the delimited export formats.

Numbers are written with 17 significant digits so every round-trip through
text is lossless for doubles.
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Sequence, TextIO

import numpy as np

from .data import DistanceMatrix, PointSet, validate_pointset
from .errors import NotSquare, ParseError
from .estimator import CdfPoint

FLOAT_FMT = "%.17g"


def _delimiter(path: str, fmt: str | None) -> str:
    if fmt is None:
        fmt = "tsv" if os.path.splitext(path)[1].lower() == ".tsv" else "csv"
    if fmt == "csv":
        return ","
    if fmt == "tsv":
        return "\t"
    raise ParseError(path, 0, detail=f"unknown format {fmt!r} (expected csv or tsv)")


def _parse_table(path: str, fmt: str | None) -> np.ndarray:
    """Rectangular numeric table; an optional single header row is detected
    by its first line failing to parse as numbers. '#' lines are comments."""
    delim = _delimiter(path, fmt)
    rows: list[list[float]] = []
    width = None
    first_data_line = True
    with open(path, "r", newline=None) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            cells = [c.strip() for c in text.split(delim)]
            parsed = []
            bad_col = None
            for col, cell in enumerate(cells, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    bad_col = col
                    break
            if bad_col is not None:
                if first_data_line:
                    first_data_line = False  # header row, skip it
                    continue
                raise ParseError(path, lineno, bad_col, f"not a number: {cells[bad_col-1]!r}")
            first_data_line = False
            if width is None:
                width = len(parsed)
            elif len(parsed) != width:
                raise ParseError(
                    path, lineno, detail=f"expected {width} columns, got {len(parsed)}"
                )
            rows.append(parsed)
    if not rows:
        raise ParseError(path, 0, detail="no numeric rows")
    return np.array(rows, dtype=np.float64)


def load_points(path: str, fmt: str | None = None) -> PointSet:
    """Load a points table (rows = samples) and validate it."""
    return validate_pointset(_parse_table(path, fmt))


def load_distance_matrix(path: str, fmt: str | None = None) -> DistanceMatrix:
    """Load a square distance matrix; symmetry is enforced to 1e-9 relative
    and residual rounding symmetrized by averaging."""
    arr = _parse_table(path, fmt)
    if arr.shape[0] != arr.shape[1]:
        raise NotSquare(arr.shape[0], arr.shape[1])
    return DistanceMatrix(arr)


def format_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return FLOAT_FMT % x


def write_points(points: np.ndarray, out: TextIO, delim: str = ",") -> None:
    for row in points:
        out.write(delim.join(FLOAT_FMT % v for v in row))
        out.write("\n")


def export_fit(
    points: Sequence[CdfPoint],
    kept: Iterable[bool],
    d_hat: float,
    path: str,
) -> None:
    """Write the fit plane as TSV rows (x, y, kept) with the fitted slope
    recorded on the single header line; enough to replot the fit with any
    plotting tool."""
    with open(path, "w") as fh:
        fh.write("# x\ty\tkept\td_hat=%s\n" % format_float(d_hat))
        for p, k in zip(points, kept):
            fh.write("%s\t%s\t%d\n" % (format_float(p.x), format_float(p.y), int(k)))


def load_fit(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Read back an export_fit file: (x, y, kept, d_hat)."""
    d_hat = math.nan
    xs, ys, ks = [], [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                for token in text[1:].split():
                    if token.startswith("d_hat="):
                        d_hat = float(token[len("d_hat="):])
                continue
            cells = text.split("\t")
            if len(cells) != 3:
                raise ParseError(path, lineno, detail="expected 3 columns")
            xs.append(float(cells[0]))
            ys.append(float(cells[1]))
            ks.append(int(cells[2]))
    return np.array(xs), np.array(ys), np.array(ks, dtype=bool), d_hat


def write_scan_tsv(curve, out: TextIO) -> None:
    out.write("# block_size\td_mean\td_std\tn_blocks\n")
    for p in curve.points:
        out.write(
            "%d\t%s\t%s\t%d\n"
            % (p.block_size, format_float(p.d_mean), format_float(p.d_std), p.n_blocks)
        )
