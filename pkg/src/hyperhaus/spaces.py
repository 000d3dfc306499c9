"""Model metric spaces: interval, circle, flat torus, pillowcase sphere and the unit square.

Points are stored as float arrays whose last axis holds the coordinates
(length 1 for the interval and circle, length 2 otherwise). All distance
functions broadcast over leading axes.

The pillowcase is the quotient of the flat torus R^2/Z^2 by the involution
x -> -x. Its four cone points are the classes of the half-lattice points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "UsageError",
    "ModelSpace",
    "Point",
    "INTERVAL",
    "CIRCLE",
    "TORUS",
    "PILLOWCASE",
    "SQUARE",
    "get_space",
    "dist",
    "cone_curvature",
    "gauss_bonnet_check",
]

# kernel codes shared with the compiled routines in _kernels
_SNAP = 2.0 ** -50

KIND_CODES = {"interval": 0, "circle": 1, "torus": 2, "pillowcase": 3, "square": 4}


class UsageError(ValueError):
    """Raised when an operation is called with arguments outside its contract."""


def _torus_diff(d):
    d = np.asarray(d, dtype=float)
    return d - np.round(d)


def _torus_norm(d):
    d = _torus_diff(d)
    return np.sqrt(np.sum(d * d, axis=-1))


@dataclass(frozen=True)
class ModelSpace:
    """One of the flat model surfaces (or the interval/circle) with its metric.

    Parameters
    ----------
    kind : {"interval", "circle", "torus", "pillowcase", "square"}
    """

    kind: str
    cone_points: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise UsageError(f"unknown space kind {self.kind!r}")
        cones = ()
        if self.kind == "pillowcase":
            cones = ((0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5))
        object.__setattr__(self, "cone_points", cones)

    @property
    def code(self) -> int:
        return KIND_CODES[self.kind]

    @property
    def dim(self) -> int:
        return 1 if self.kind in ("interval", "circle") else 2

    @property
    def periodic(self) -> bool:
        return self.kind in ("circle", "torus", "pillowcase")

    @property
    def ambient_diameter(self) -> float:
        return {
            "interval": 1.0,
            "circle": 0.5,
            "torus": math.sqrt(2.0) / 2.0,
            # opposite corners of a face, e.g. cone points (0, 0) and (1/2, 1/2)
            "pillowcase": math.sqrt(2.0) / 2.0,
            "square": math.sqrt(2.0),
        }[self.kind]

    @property
    def prongs(self) -> tuple:
        """Prong counts of the foliation singularities (one per cone point)."""
        return (1,) * len(self.cone_points)

    @property
    def area(self) -> float:
        return {"interval": 1.0, "circle": 1.0, "torus": 1.0, "pillowcase": 0.5, "square": 1.0}[self.kind]

    def fundamental_box(self) -> tuple:
        """Axis-aligned box ((lo, hi) per coordinate) containing all canonical points."""
        if self.kind == "pillowcase":
            return ((0.0, 0.5), (0.0, 1.0))
        return ((0.0, 1.0),) * self.dim

    # -- coordinates -------------------------------------------------
    def as_coords(self, p) -> np.ndarray:
        """Coerce a Point, scalar or array into a float array with a coordinate axis."""
        if isinstance(p, Point):
            if p.space != self:
                raise UsageError(f"point of {p.space.kind} used in {self.kind}")
            return np.asarray(p.coords, dtype=float)
        a = np.asarray(p, dtype=float)
        if self.dim == 1 and (a.ndim == 0 or a.shape[-1] != 1):
            a = a[..., None]
        if a.shape[-1] != self.dim:
            raise UsageError(f"{self.kind} points need {self.dim} coordinate(s), got shape {a.shape}")
        return a

    def canonical(self, coords) -> np.ndarray:
        """Reduce lifted coordinates to the canonical representative."""
        c = self.as_coords(coords)
        if self.kind == "interval":
            if np.any((c < -1e-12) | (c > 1 + 1e-12)):
                raise UsageError("interval coordinates must lie in [0, 1]")
            return np.clip(c, 0.0, 1.0)
        if self.kind == "square":
            if np.any((c < -1e-12) | (c > 1 + 1e-12)):
                raise UsageError("square coordinates must lie in [0, 1]^2")
            return np.clip(c, 0.0, 1.0)
        r = np.mod(c, 1.0)
        # residues within 2^-50 of an integer become 0; then 1 - r never needs the same treatment,
        # which keeps the pillowcase representative idempotent
        r = np.where((r < _SNAP) | (r > 1.0 - _SNAP), 0.0, r)
        if self.kind != "pillowcase":
            return r
        n = np.where(r == 0.0, 0.0, 1.0 - r)
        use_neg = (n[..., 0] < r[..., 0]) | ((n[..., 0] == r[..., 0]) & (n[..., 1] < r[..., 1]))
        return np.where(use_neg[..., None], n, r)

    project = canonical

    def dist(self, p, q) -> np.ndarray:
        """Geodesic distance between (arrays of) points; broadcasts over leading axes."""
        a = self.as_coords(p)
        b = self.as_coords(q)
        if self.kind in ("interval", "square"):
            d = a - b
            return np.sqrt(np.sum(d * d, axis=-1))
        if self.kind == "circle":
            d = np.abs(a[..., 0] - b[..., 0]) % 1.0
            return np.minimum(d, 1.0 - d)
        if self.kind == "torus":
            return _torus_norm(a - b)
        return np.minimum(_torus_norm(a - b), _torus_norm(a + b))

    def point(self, *coords) -> "Point":
        return Point(self, tuple(float(c) for c in coords))

    def random_points(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Uniform random canonical points, shape (n, dim)."""
        lo_hi = self.fundamental_box()
        cols = [rng.uniform(lo, hi, n) for lo, hi in lo_hi]
        return self.canonical(np.stack(cols, axis=-1))

    def grid_sample(self, gauge: float) -> np.ndarray:
        """Uniform cell-centre sample whose covering radius is at most ``gauge``."""
        if gauge <= 0:
            raise UsageError("gauge must be positive")
        if self.dim == 1:
            m = int(math.ceil(0.5 / gauge))
            return ((np.arange(m) + 0.5) / m)[:, None]
        m = int(math.ceil(math.sqrt(2.0) / (2.0 * gauge)))
        if self.kind == "pillowcase" and m % 2:
            # an even torus grid is invariant under x -> -x
            m += 1
        g = (np.arange(m) + 0.5) / m
        pts = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        if self.kind == "pillowcase":
            pts = np.unique(self.canonical(pts), axis=0)
        return pts


INTERVAL = ModelSpace("interval")
CIRCLE = ModelSpace("circle")
TORUS = ModelSpace("torus")
PILLOWCASE = ModelSpace("pillowcase")
SQUARE = ModelSpace("square")

_SPACES = {s.kind: s for s in (INTERVAL, CIRCLE, TORUS, PILLOWCASE, SQUARE)}


def get_space(kind) -> ModelSpace:
    if isinstance(kind, ModelSpace):
        return kind
    try:
        return _SPACES[kind]
    except KeyError:
        raise UsageError(f"unknown space kind {kind!r}") from None


@dataclass(frozen=True)
class Point:
    """A canonical point of a model space."""

    space: ModelSpace
    coords: tuple

    def __post_init__(self):
        c = self.space.canonical(np.asarray(self.coords, dtype=float).reshape(self.space.dim))
        object.__setattr__(self, "coords", tuple(float(v) for v in c))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype or float)


def dist(space: ModelSpace, p, q) -> float:
    """Distance between two points of ``space``.

    Raises UsageError when a Point from another space is passed.
    """
    for x in (p, q):
        if isinstance(x, Point) and x.space != space:
            raise UsageError(f"point of {x.space.kind} used in {space.kind}")
    d = space.dist(p, q)
    return float(d) if np.ndim(d) == 0 else d


def cone_curvature(n: int) -> float:
    """Curvature (2 - n) * pi concentrated at an n-prong singularity."""
    if int(n) != n or n < 1:
        raise UsageError(f"prong count must be a positive integer, got {n!r}")
    return (2 - int(n)) * math.pi


def gauss_bonnet_check(space) -> float:
    """Total cone curvature of a space, or of an explicit list of prong counts.

    Equals 2*pi*chi: 4*pi for the pillowcase sphere, 0 for the torus.
    """
    prongs = space.prongs if isinstance(space, ModelSpace) else tuple(space)
    return float(sum(cone_curvature(n) for n in prongs))
