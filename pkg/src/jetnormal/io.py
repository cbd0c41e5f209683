"""ASCII point/normal files (one ``x y z`` triple per line) and error-heatmap PLY."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import MalformedLine
from .geometry import PointCloud

DEFAULT_HEATMAP_MAX_DEG = 60.0


def format_float(x: float) -> str:
    """Shortest decimal that round-trips, without a trailing ``.0``."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _read_triples(path) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 3:
                raise MalformedLine(line_no, f"expected 3 columns, found {len(parts)}")
            try:
                vals = [float(p) for p in parts]
            except ValueError:
                raise MalformedLine(line_no, "not a decimal number") from None
            if not all(math.isfinite(v) for v in vals):
                raise MalformedLine(line_no, "non-finite value")
            rows.append(vals)
    return np.array(rows, dtype=float).reshape(-1, 3)


def _write_triples(path, triples) -> None:
    arr = np.asarray(triples, dtype=float).reshape(-1, 3)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for row in arr:
            fh.write(" ".join(format_float(v) for v in row) + "\n")


def read_xyz(path, normals_path=None) -> PointCloud:
    """Read a point file, optionally paired with a ground-truth normal file."""
    pts = _read_triples(path)
    gt = read_normals(normals_path) if normals_path is not None else None
    return PointCloud(pts, gt)


def read_normals(path) -> np.ndarray:
    return _read_triples(path)


def write_xyz(path, points) -> None:
    _write_triples(path, points)


def write_normals(path, normals) -> None:
    """One ``nx ny nz`` line per normal in shortest round-trip decimal form."""
    _write_triples(path, normals)


def error_colors(errors, max_deg: float = DEFAULT_HEATMAP_MAX_DEG) -> np.ndarray:
    """Linear blue-to-red ramp on ``clip(error / max_deg, 0, 1)`` as uint8 RGB."""
    t = np.clip(np.asarray(errors, dtype=float) / max_deg, 0.0, 1.0)
    red = np.rint(255.0 * t)
    blue = 255.0 - red
    return np.column_stack([red, np.zeros_like(red), blue]).astype(np.uint8)


def write_error_ply(path, points, errors, max_deg: float = DEFAULT_HEATMAP_MAX_DEG) -> None:
    """ASCII PLY with per-vertex position and error color."""
    pts = np.asarray(points.points if isinstance(points, PointCloud) else points, dtype=float).reshape(-1, 3)
    errors = np.asarray(errors, dtype=float).ravel()
    if len(errors) != len(pts):
        raise ValueError(f"{len(errors)} errors for {len(pts)} points")
    if not max_deg > 0:
        raise ValueError("max_deg must be positive")
    colors = error_colors(errors, max_deg)
    header = [
        "ply",
        "format ascii 1.0",
        f"comment angle error colormap 0 to {format_float(max_deg)} degrees",
        f"element vertex {len(pts)}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ]
    with open(Path(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(header) + "\n")
        for p, c in zip(pts, colors):
            fh.write(" ".join(format_float(v) for v in p) + f" {c[0]} {c[1]} {c[2]}\n")


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise MalformedLine(line_no, "expected key = value")
            key, value = (s.strip() for s in text.split("=", 1))
            out[key.replace("-", "_")] = value
    return out
