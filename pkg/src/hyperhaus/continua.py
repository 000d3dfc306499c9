"""Discretized continua: polyline arcs given by lifted vertices, and plain samples.

An arc is stored in the universal cover (the line for the circle, the plane for
the torus and pillowcase) and projected on demand. Keeping lifts makes the
linear maps in ``dynamics`` exact on vertices and avoids wrap-around artefacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .budget import ErrorBudget
from .spaces import ModelSpace, UsageError, get_space

__all__ = [
    "PolylineArc",
    "SampledContinuum",
    "GridSamples",
    "subarc",
    "resample",
    "length",
    "diameter",
    "kernel_points",
]

MAX_GAUGE = 0.25
_REL = 1e-9


def kernel_points(points) -> np.ndarray:
    """Contiguous (n, 2) float array as expected by the compiled kernels."""
    p = np.asarray(points, dtype=float)
    if p.ndim == 1:
        p = p[:, None]
    if p.shape[1] == 1:
        p = np.concatenate([p, np.zeros_like(p)], axis=1)
    return np.ascontiguousarray(p)


def _split_counts(seglen, h):
    # the relative slack keeps resample idempotent under rounding
    return np.maximum(1, np.ceil(seglen / h - _REL)).astype(np.int64)


@dataclass(frozen=True)
class GridSamples:
    """Points along an arc, consecutive ones at most ``step`` apart.

    For a closed loop the final sample (equal to the first) is dropped and
    windows wrap around; ``cyclic`` records this.
    """

    points: np.ndarray
    step: float
    cyclic: bool

    @property
    def count(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class PolylineArc:
    """An arc (or closed loop) as a polyline in the universal cover.

    Parameters
    ----------
    space : ModelSpace or str
    lifted_vertices : array_like, shape (n,) or (n, dim)
        Consecutive vertices must be at most ``gauge`` apart.
    gauge : float
        Sampling bound, ``0 < gauge <= 0.25`` so each segment projects isometrically.
    closed : bool
        Marks a loop whose last vertex projects onto the first.
    """

    space: ModelSpace
    lifted_vertices: np.ndarray
    gauge: float
    closed: bool = False
    cumulative_length: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        space = get_space(self.space)
        object.__setattr__(self, "space", space)
        if not (0 < self.gauge <= MAX_GAUGE):
            raise UsageError(f"gauge must lie in (0, {MAX_GAUGE}], got {self.gauge}")
        v = np.array(self.lifted_vertices, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2 or v.shape[1] != space.dim or v.shape[0] == 0:
            raise UsageError(f"{space.kind} arcs need a nonempty (n, {space.dim}) vertex array")
        if not np.all(np.isfinite(v)):
            raise UsageError("vertices must be finite")
        if space.kind in ("interval", "square") and np.any((v < -1e-12) | (v > 1 + 1e-12)):
            raise UsageError(f"{space.kind} lifts must stay inside [0, 1]")
        seg = np.sqrt(np.sum(np.diff(v, axis=0) ** 2, axis=1))
        if seg.size and seg.max() > self.gauge * (1 + _REL):
            raise UsageError(f"vertex gap {seg.max():.6g} exceeds gauge {self.gauge}")
        if self.closed:
            gap = space.dist(v[0], v[-1])
            if v.shape[0] < 2 or gap > 1e-9:
                raise UsageError("a closed arc must end where it starts")
        v.setflags(write=False)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        cum.setflags(write=False)
        object.__setattr__(self, "lifted_vertices", v)
        object.__setattr__(self, "gauge", float(self.gauge))
        object.__setattr__(self, "cumulative_length", cum)

    # -- constructors ----------------------------------------------------
    @classmethod
    def from_points(cls, space, lifted_points, gauge: float, closed: bool = False) -> "PolylineArc":
        """Polyline through the given lifted points, subdivided so gaps are <= gauge."""
        space = get_space(space)
        p = np.asarray(lifted_points, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        if p.shape[0] < 2:
            return cls(space, p, gauge, closed)
        seg = np.sqrt(np.sum(np.diff(p, axis=0) ** 2, axis=1))
        k = _split_counts(seg, gauge)
        return cls(space, _subdivide(p, k), gauge, closed)

    @classmethod
    def segment(cls, space, start, end, gauge: float) -> "PolylineArc":
        """Straight lifted segment from ``start`` to ``end``."""
        return cls.from_points(space, [np.atleast_1d(start), np.atleast_1d(end)], gauge)

    # -- measurements ----------------------------------------------------
    @property
    def vertices(self) -> np.ndarray:
        return self.lifted_vertices

    @property
    def length(self) -> float:
        return float(self.cumulative_length[-1])

    def __len__(self):
        return self.lifted_vertices.shape[0]

    def lift_at(self, t) -> np.ndarray:
        """Lifted point(s) at arc-length parameter(s) ``t``."""
        t = np.asarray(t, dtype=float)
        cum = self.cumulative_length
        v = self.lifted_vertices
        if v.shape[0] == 1:
            return np.broadcast_to(v[0], t.shape + (v.shape[1],)).copy()
        j = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(cum) - 2)
        seg = cum[j + 1] - cum[j]
        with np.errstate(invalid="ignore", divide="ignore"):
            w = np.where(seg > 0, (t - cum[j]) / seg, 0.0)
        w = np.clip(w, 0.0, 1.0)[..., None]
        return v[j] * (1 - w) + v[j + 1] * w

    def samples(self) -> np.ndarray:
        """Projected canonical vertices, shape (n, dim)."""
        return self.space.canonical(self.lifted_vertices)

    def on_grid(self, grid: float) -> GridSamples:
        """Projected samples with gaps at most ``grid`` that include every vertex.

        When the gauge is already within ``grid`` the samples are the vertices
        themselves, so the whole arc as a grid window has the same samples as
        the arc; otherwise longer segments are split evenly.
        """
        if grid <= 0:
            raise UsageError("grid must be positive")
        v = self.lifted_vertices
        if v.shape[0] > 1 and self.gauge > grid:
            v = _subdivide(v, _split_counts(np.diff(self.cumulative_length), grid))
        pts = self.space.canonical(v)
        gaps = np.sqrt(np.sum(np.diff(v, axis=0) ** 2, axis=1))
        step = float(gaps.max()) if gaps.size else 0.0
        if self.closed and v.shape[0] > 1:
            return GridSamples(pts[:-1], step, True)
        return GridSamples(pts, step, False)

    def translate(self, offset) -> "PolylineArc":
        return PolylineArc(self.space, self.lifted_vertices + np.asarray(offset, dtype=float),
                           self.gauge, self.closed)


@dataclass(frozen=True, eq=False)
class SampledContinuum:
    """A finite sample of a continuum, each of whose points is within ``gauge`` of the sample."""

    space: ModelSpace
    points: np.ndarray
    gauge: float

    def __post_init__(self):
        space = get_space(self.space)
        object.__setattr__(self, "space", space)
        p = space.canonical(np.asarray(self.points, dtype=float))
        if p.ndim == 1:
            p = p[:, None]
        if p.shape[0] == 0:
            raise UsageError("empty continuum")
        if self.gauge < 0:
            raise UsageError("gauge must be nonnegative")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "gauge", float(self.gauge))

    @classmethod
    def ambient(cls, space, gauge: float) -> "SampledContinuum":
        """The whole space, as a grid sample of covering radius <= gauge."""
        space = get_space(space)
        return cls(space, space.grid_sample(gauge), gauge)

    def samples(self) -> np.ndarray:
        return self.points


def _subdivide(p, k):
    """Insert k[i] - 1 evenly spaced points inside segment i of polyline p."""
    k = np.asarray(k, dtype=np.int64)
    seg = np.repeat(np.arange(p.shape[0] - 1), k)
    j = np.arange(seg.size) - np.repeat(np.cumsum(k) - k, k) + 1
    w = (j / k[seg])[:, None]
    inner = p[seg] * (1 - w) + p[seg + 1] * w
    inner[np.cumsum(k) - 1] = p[1:]
    return np.concatenate([p[:1], inner], axis=0)


def subarc(a: PolylineArc, s: float, t: float) -> PolylineArc:
    """Restriction of ``a`` to arc-length parameters [s, t]; endpoints interpolated."""
    L = a.length
    tol = 1e-12 * max(1.0, L)
    if not (-tol <= s <= t <= L + tol):
        raise UsageError(f"need 0 <= s <= t <= {L}, got s={s}, t={t}")
    s = min(max(s, 0.0), L)
    t = min(max(t, s), L)
    if s == t:
        return PolylineArc(a.space, a.lift_at(np.array([s])), a.gauge)
    cum = a.cumulative_length
    inner = np.nonzero((cum > s) & (cum < t))[0]
    v = np.concatenate([a.lift_at(np.array([s])), a.lifted_vertices[inner], a.lift_at(np.array([t]))])
    return PolylineArc(a.space, v, a.gauge)


def resample(a: PolylineArc, h: float) -> PolylineArc:
    """Same curve with every gap at most ``h``; existing vertices are kept."""
    if h <= 0:
        raise UsageError("h must be positive")
    v = a.lifted_vertices
    gauge = min(h, a.gauge)
    if v.shape[0] < 2:
        return PolylineArc(a.space, v, gauge, a.closed)
    seg = np.diff(a.cumulative_length)
    return PolylineArc(a.space, _subdivide(v, _split_counts(seg, h)), gauge, a.closed)


def length(a: PolylineArc) -> float:
    return a.length


def _pairwise_max(space, p, chunk=2048):
    best = 0.0
    for i in range(0, p.shape[0], chunk):
        d = space.dist(p[i:i + chunk, None, :], p[None, :, :])
        best = max(best, float(d.max()))
    return best


def diameter(c) -> ErrorBudget:
    """Largest pairwise distance between samples, with the sampling gauge as slack."""
    p = c.samples()
    return ErrorBudget(_pairwise_max(c.space, p), c.gauge)
