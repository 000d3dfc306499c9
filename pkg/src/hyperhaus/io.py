"""Reading and writing arcs, series and families.

Arcs are CSV files with the header ``t,x,y``: one row per lifted vertex, ``t``
the arc length from the first vertex.  Floats are written with ``repr`` so a
written arc reads back bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .continua import MAX_GAUGE, PolylineArc
from .spaces import UsageError, get_space

__all__ = ["format_arc", "write_arc", "read_arc", "write_series", "read_series", "export_family", "unwrap_samples"]

ARC_HEADER = ["t", "x", "y"]


def format_arc(arc: PolylineArc) -> str:
    """The ``t,x,y`` CSV text of an arc."""
    lines = [",".join(ARC_HEADER)]
    for t, row in zip(arc.cumulative_length, arc.lifted_vertices):
        y = row[1] if row.shape[0] > 1 else 0.0
        lines.append(f"{float(t)!r},{float(row[0])!r},{float(y)!r}")
    return "\n".join(lines) + "\n"


def write_arc(path, arc: PolylineArc) -> Path:
    path = Path(path)
    path.write_text(format_arc(arc))
    return path


def read_arc(path, space="torus", gauge: float | None = None, closed: bool | None = None) -> PolylineArc:
    """Arc from a ``t,x,y`` CSV.

    Without ``gauge`` the largest vertex gap is used (capped at the largest
    admissible gauge, subdividing longer segments).  ``closed`` defaults to
    whether the last vertex projects onto the first.
    """
    space = get_space(space)
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ARC_HEADER:
        raise UsageError(f"{path}: first line must be the header t,x,y")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] != 3:
        raise UsageError(f"{path}: need at least one row of three numbers")
    v = data[:, 1:1 + space.dim]
    seg = np.sqrt(np.sum(np.diff(v, axis=0) ** 2, axis=1))
    if gauge is None:
        gauge = float(min(MAX_GAUGE, seg.max())) if seg.size and seg.max() > 0 else MAX_GAUGE
    if closed is None:
        closed = v.shape[0] > 2 and float(space.dist(v[0], v[-1])) <= 1e-9
    return PolylineArc.from_points(space, v, gauge, closed)


def write_series(path, series) -> Path:
    path = Path(path)
    path.write_text("\n".join(series.csv_rows()) + "\n")
    return path


def read_series(path) -> list:
    """[(n, value, slack), ...] from an ``n,value,slack`` CSV."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["n", "value", "slack"]:
        raise UsageError(f"{path}: expected header n,value,slack")
    return [(int(r[0]), float(r[1]), float(r[2])) for r in rows[1:] if r]


def unwrap_samples(space, pts) -> np.ndarray:
    """Lift consecutive canonical samples (less than a quarter apart) to a continuous path."""
    space = get_space(space)
    p = space.as_coords(pts)
    if not space.periodic:
        return p.copy()
    out = np.empty_like(p)
    out[0] = p[0]
    for i in range(1, p.shape[0]):
        cands = [p[i], -p[i]] if space.kind == "pillowcase" else [p[i]]
        steps = [c - out[i - 1] for c in cands]
        steps = [s - np.round(s) for s in steps]
        out[i] = out[i - 1] + min(steps, key=lambda s: float(np.sum(s * s)))
    return out


def export_family(fam, directory) -> Path:
    """Write each listed element as an arc CSV plus ``manifest.json``.

    The ambient member is not written; the manifest records whether it is
    part of the family and its gauge.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    pts, ofs = fam._arc_blocks()
    dim = fam.space.dim
    files = []
    width = len(str(max(fam.n_arcs - 1, 0)))
    for i in range(fam.n_arcs):
        block = pts[ofs[i]:ofs[i + 1], :dim]
        lift = unwrap_samples(fam.space, block)
        if lift.ndim == 1:
            lift = lift[:, None]
        t = np.concatenate([[0.0], np.cumsum(np.sqrt(np.sum(np.diff(lift, axis=0) ** 2, axis=1)))])
        name = f"element_{i:0{width}d}.csv"
        with (directory / name).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(ARC_HEADER)
            for tt, row in zip(t, lift):
                w.writerow([repr(float(tt)), repr(float(row[0])), repr(float(row[1]) if dim > 1 else 0.0)])
        files.append(name)
    manifest = fam.manifest()
    manifest["files"] = files
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return directory
