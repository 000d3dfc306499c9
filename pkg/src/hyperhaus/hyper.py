"""Finite families of continua standing in for hypercontinua.

A family stores its elements as packed sample arrays (one block of canonical
points per element) plus an optional ambient member.  Families made of grid
windows of a single arc also keep that arc's grid sample as ``parent``, so
distances between them can go through the second-order engine.
"""

from __future__ import annotations

import math

import numpy as np

from .continua import GridSamples, PolylineArc, SampledContinuum, kernel_points
from .spaces import CIRCLE, INTERVAL, SQUARE, ModelSpace, UsageError, get_space

__all__ = [
    "FiniteHyperFamily",
    "stable_family",
    "unstable_family",
    "foliation_family",
    "default_ladder",
    "marked_hypercircle",
    "circle_arc",
    "full_circle",
    "interval_arc",
    "interval_triangle",
    "triangle_interval",
    "square_boundary",
    "square_gap_arc",
]


class FiniteHyperFamily:
    """A finite set of continua approximating a hypercontinuum.

    Parameters
    ----------
    space : ModelSpace
    points, offsets : packed canonical samples; element i is ``points[offsets[i]:offsets[i+1]]``
    resolution : float
        Every member of the intended hypercontinuum is within this d_H of a listed element.
    gauge : float
        Sampling gauge of the listed elements.
    ambient : SampledContinuum or None
        The whole space as an extra member.
    """

    def __init__(self, space, points, offsets, resolution, gauge, ambient=None, parent=None,
                 windows=None, straight=None, meta=None):
        self.space = get_space(space)
        self._points = None if points is None else kernel_points(points)
        self._offsets = None if offsets is None else np.asarray(offsets, dtype=np.int64)
        self.resolution = float(resolution)
        self.gauge = float(gauge)
        self.ambient = ambient
        self.parent = parent
        self.windows = windows
        self.straight = straight
        self.meta = dict(meta or {})
        if self.n_arcs == 0 and ambient is None:
            raise UsageError("a family needs at least one element")

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_windows(cls, space, g: GridSamples, resolution, gauge, meta=None):
        from .metrics import _windows

        w = _windows(g.count, g.cyclic)
        return cls(space, None, None, resolution, gauge, parent=g, windows=w, meta=meta)

    @classmethod
    def from_continua(cls, elements, resolution, ambient=None, meta=None):
        elements = list(elements)
        if not elements and ambient is None:
            raise UsageError("a family needs at least one element")
        space = (elements[0] if elements else ambient).space
        if any(e.space != space for e in elements):
            raise UsageError("all elements must share the space")
        blocks = [kernel_points(e.samples()) for e in elements]
        offsets = np.concatenate([[0], np.cumsum([b.shape[0] for b in blocks])]).astype(np.int64)
        pts = np.concatenate(blocks) if blocks else np.zeros((0, 2))
        gauge = max((e.gauge for e in elements), default=0.0)
        return cls(space, pts, offsets, resolution, gauge, ambient=ambient, meta=meta)

    # -- contents ----------------------------------------------------------
    @property
    def includes_ambient(self) -> bool:
        return self.ambient is not None

    @property
    def n_arcs(self) -> int:
        if self.windows is not None:
            return self.windows.shape[0]
        return len(self._offsets) - 1

    def __len__(self):
        return self.n_arcs + (1 if self.includes_ambient else 0)

    def _arc_blocks(self):
        if self._points is None:
            g = kernel_points(self.parent.points)
            M = g.shape[0]
            sizes = self.windows[:, 1] + 1
            offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
            idx = np.concatenate([(lo + np.arange(w + 1)) % M for lo, w in self.windows])
            self._points = np.ascontiguousarray(g[idx])
            self._offsets = offsets
        return self._points, self._offsets

    def packed(self):
        """(points, offsets) with the ambient member, if any, as the last block."""
        pts, ofs = self._arc_blocks()
        if not self.includes_ambient:
            return pts, ofs
        amb = kernel_points(self.ambient.points)
        return (np.ascontiguousarray(np.concatenate([pts, amb])),
                np.concatenate([ofs, [ofs[-1] + amb.shape[0]]]).astype(np.int64))

    def element(self, i: int) -> SampledContinuum:
        if i == self.n_arcs and self.includes_ambient:
            return self.ambient
        pts, ofs = self._arc_blocks()
        block = pts[ofs[i]:ofs[i + 1], : self.space.dim]
        return SampledContinuum(self.space, block, self.gauge)

    @property
    def elements(self) -> list:
        return [self.element(i) for i in range(len(self))]

    def without_ambient(self) -> "FiniteHyperFamily":
        return FiniteHyperFamily(self.space, self._points, self._offsets, self.resolution, self.gauge,
                                 None, self.parent, self.windows, self.straight, self.meta)

    def manifest(self) -> dict:
        out = {"space": self.space.kind, "elements": len(self), "resolution": self.resolution,
               "gauge": self.gauge, "includes_ambient": self.includes_ambient}
        out.update({k: v for k, v in self.meta.items() if isinstance(v, (int, float, str, list, bool))})
        return out


# ---------------------------------------------------------------------------
# foliation families
# ---------------------------------------------------------------------------


def default_ladder(L_max: float = 2.0, step: float = 0.05) -> np.ndarray:
    n = int(round(L_max / step))
    return np.round(np.arange(n + 1) * step, 12)


def base_centres(space: ModelSpace, base_grid: int) -> np.ndarray:
    """Cell centres of a base_grid x base_grid torus grid, as canonical points."""
    g = (np.arange(base_grid) + 0.5) / base_grid
    pts = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    if space.kind == "pillowcase":
        pts = np.unique(space.canonical(pts), axis=0)
    return pts


def foliation_family(system, direction: str = "stable", base_grid: int = 32, ladder=None,
                     L_max: float = 2.0, gauge: float = 0.01, ambient: bool = True,
                     ambient_gauge: float | None = None) -> FiniteHyperFamily:
    """Straight leaf arcs centred on a base grid, one per ladder length, plus the ambient sample.

    Resolution is the largest of the centre half-diagonal, half the ladder gap
    and the ambient gauge.
    """
    from .dynamics import LIFT_BUDGET

    space = system.space
    if base_grid < 1:
        raise UsageError("base_grid must be positive")
    ladder = default_ladder(L_max) if ladder is None else np.asarray(sorted(ladder), dtype=float)
    if ladder.size == 0 or ladder[0] != 0 or not math.isclose(ladder[-1], L_max):
        raise UsageError("ladder must start at 0 and end at L_max")
    if L_max > LIFT_BUDGET:
        raise UsageError(f"L_max={L_max} exceeds the lift precision budget")
    centres = base_centres(space, base_grid)
    gap = float(np.max(np.diff(ladder))) if ladder.size > 1 else 0.0
    half_diag = math.sqrt(2.0) / (2 * base_grid)
    target = max(half_diag, gap / 2)
    amb_gauge = target if ambient_gauge is None else ambient_gauge
    resolution = max(target, amb_gauge if ambient else 0.0)
    u = system.direction(direction)
    # one sample template per ladder length, shared by every centre
    temps = []
    for L in ladder:
        m = max(1, int(math.ceil(L / gauge - 1e-9))) if L > 0 else 0
        temps.append(np.linspace(-L / 2, L / 2, m + 1))
    sizes = np.array([t.size for t in temps])
    nc, nl = centres.shape[0], ladder.size
    offsets = np.concatenate([[0], np.cumsum(np.tile(sizes, nc))]).astype(np.int64)
    ts = np.concatenate(temps)
    lifts = centres[:, None, :] + ts[None, :, None] * u[None, None, :]
    pts = space.canonical(lifts.reshape(-1, 2))
    straight = {
        "centre": np.repeat(centres, nl, axis=0),
        "half": np.tile(ladder / 2, nc),
        "direction": u,
    }
    amb = SampledContinuum.ambient(space, amb_gauge) if ambient else None
    meta = {"kind": direction, "base_grid": base_grid, "ladder": [float(x) for x in ladder],
            "L_max": float(L_max), "gauge": gauge, "ambient_gauge": amb_gauge}
    return FiniteHyperFamily(space, pts, offsets, resolution, gauge, ambient=amb, straight=straight, meta=meta)


def stable_family(system, base_grid: int = 32, ladder=None, L_max: float = 2.0, gauge: float = 0.01,
                  ambient: bool = True, ambient_gauge: float | None = None) -> FiniteHyperFamily:
    return foliation_family(system, "stable", base_grid, ladder, L_max, gauge, ambient, ambient_gauge)


def unstable_family(system, base_grid: int = 32, ladder=None, L_max: float = 2.0, gauge: float = 0.01,
                    ambient: bool = True, ambient_gauge: float | None = None) -> FiniteHyperFamily:
    return foliation_family(system, "unstable", base_grid, ladder, L_max, gauge, ambient, ambient_gauge)


# ---------------------------------------------------------------------------
# circle, interval and square examples
# ---------------------------------------------------------------------------


def circle_arc(start: float, length: float, gauge: float = 0.005) -> PolylineArc:
    """The arc [start, start + length] of the circle of circumference 1."""
    if not 0 <= length <= 1:
        raise UsageError("circle arcs have length in [0, 1]")
    return PolylineArc.from_points(CIRCLE, [[start], [start + length]], gauge)


def full_circle(gauge: float = 0.005, start: float = 0.0) -> PolylineArc:
    return PolylineArc.from_points(CIRCLE, [[start], [start + 1.0]], gauge, closed=True)


def marked_hypercircle(s, grid: float) -> FiniteHyperFamily:
    """All grid arcs [s + a, s + a + l] with a + l <= 1, i.e. arcs with s not in their interior.

    These are exactly the subarcs of the circle cut open at s, so the family is
    the window family of the open arc [s, s + 1].
    """
    s = float(CIRCLE.as_coords(s).ravel()[0])
    if grid <= 0:
        raise UsageError("grid must be positive")
    cut = PolylineArc.from_points(CIRCLE, [[s], [s + 1.0]], min(grid, 0.25))
    g = cut.on_grid(grid)
    return FiniteHyperFamily.from_windows(CIRCLE, g, resolution=grid, gauge=g.step,
                                          meta={"mark": s, "grid": grid})


def interval_arc(a: float, b: float, gauge: float = 0.01) -> PolylineArc:
    if not 0 <= a <= b <= 1:
        raise UsageError("need 0 <= a <= b <= 1")
    return PolylineArc.from_points(INTERVAL, [[a], [b]], gauge)


def interval_triangle(interval) -> tuple:
    """Coordinates (a, b) of the interval [a, b] in the triangle {a <= b} of the unit square."""
    if isinstance(interval, PolylineArc):
        v = interval.lifted_vertices[:, 0]
        a, b = float(v[0]), float(v[-1])
    else:
        a, b = (float(x) for x in interval)
    if a > b:
        raise UsageError(f"interval endpoints out of order: {a} > {b}")
    if a < 0 or b > 1:
        raise UsageError("interval must lie in [0, 1]")
    return a, b


def triangle_interval(ab, gauge: float = 0.01) -> PolylineArc:
    a, b = ab
    return interval_arc(a, b, gauge)


_SQUARE_CORNERS = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])


def square_boundary(gauge: float = 0.01) -> PolylineArc:
    """Boundary of the unit square as a closed loop starting at (0, 0)."""
    return PolylineArc.from_points(SQUARE, _SQUARE_CORNERS, gauge, closed=True)


def square_gap_arc(r: float, gauge: float = 0.01, centre: float = 0.5) -> PolylineArc:
    """The square boundary with an open gap of length r centred at (centre, 0) removed.

    The result is an arc running from the right end of the gap once around the
    square to its left end.
    """
    if not 0 < r < 4:
        raise UsageError("gap length must lie in (0, 4)")
    loop = square_boundary(gauge)
    from .continua import subarc

    L = loop.length
    left, right = centre - r / 2, centre + r / 2
    if left < 0 or right > 1:
        raise UsageError("the gap must stay on the bottom edge")
    # walk the loop from the right end of the gap to its left end
    a = subarc(loop, right, L)
    b = subarc(loop, 0.0, left)
    v = np.concatenate([a.lifted_vertices, b.lifted_vertices[1:]])
    return PolylineArc.from_points(SQUARE, v, gauge)
