"""CSV point files and small JSON helpers.

The point format is a header ``x0,x1,...,x{D-1}`` with an optional final
``weight`` column (default 1.0), one point per row, '.' decimal separator.
Floats are written with ``repr`` so a load/save round trip is lossless.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import SerializationError


def format_float(x: float) -> str:
    return repr(float(x))


def points_to_csv(points: np.ndarray, weights: np.ndarray | None = None) -> str:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise SerializationError("points must be a 2-D array")
    cols = [f"x{i}" for i in range(pts.shape[1])]
    if weights is not None:
        cols.append("weight")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for i, p in enumerate(pts):
        row = [format_float(v) for v in p]
        if weights is not None:
            row.append(format_float(weights[i]))
        writer.writerow(row)
    return buf.getvalue()


def points_from_csv(text: str) -> tuple[np.ndarray, np.ndarray | None]:
    """Parse the point format; returns (points, weights-or-None)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SerializationError("empty point file") from None
    header = [h.strip() for h in header]
    has_weight = bool(header) and header[-1] == "weight"
    coord_cols = header[:-1] if has_weight else header
    expected = [f"x{i}" for i in range(len(coord_cols))]
    if coord_cols != expected or not coord_cols:
        raise SerializationError(
            f"bad header {header!r}; want x0..x{{D-1}} then optional weight"
        )
    rows = [r for r in reader if r]
    if not rows:
        raise SerializationError("point file has a header but no rows")
    try:
        data = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise SerializationError(f"non-numeric cell: {exc}") from exc
    if data.shape[1] != len(header):
        raise SerializationError("row length disagrees with header")
    if has_weight:
        return data[:, :-1], data[:, -1]
    return data, None


def load_points(path) -> tuple[np.ndarray, np.ndarray | None]:
    return points_from_csv(Path(path).read_text(encoding="utf-8"))


def save_points(path, points, weights=None) -> None:
    Path(path).write_text(points_to_csv(points, weights), encoding="utf-8")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SerializationError(f"{path}: not valid JSON: {exc}") from exc


def save_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
