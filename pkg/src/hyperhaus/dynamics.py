"""Linear Anosov maps of the torus and their pillowcase quotients.

The map acts on lifts by an integer matrix, so images of polyline arcs are
computed exactly on vertices; only the final projection reduces mod 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .continua import PolylineArc, resample
from .spaces import PILLOWCASE, TORUS, ModelSpace, Point, UsageError

__all__ = [
    "PrecisionError",
    "ToralAutomorphism",
    "PillowcaseSystem",
    "CAT_MAP",
    "apply",
    "stable_arc",
    "unstable_arc",
    "straight_arc",
    "iterate_arc",
    "translate_arc",
    "fold_segment",
    "LIFT_BUDGET",
]

# longest lifted arc we trust to 1e-9 after projection
LIFT_BUDGET = 1e8


class PrecisionError(UsageError):
    """An iterate would stretch lifted coordinates beyond the precision budget."""


def _eigvec(m, lam):
    a, b = m[0]
    c, d = m[1]
    v = np.array([b, lam - a]) if abs(b) >= abs(c) else np.array([lam - d, c])
    v = v / np.hypot(*v)
    return v if v[0] > 0 or (v[0] == 0 and v[1] > 0) else -v


@dataclass(frozen=True)
class ToralAutomorphism:
    """Hyperbolic integer matrix acting on R^2/Z^2.

    Parameters
    ----------
    matrix : 2x2 nested tuple of ints with determinant +-1
    """

    matrix: tuple = ((2, 1), (1, 1))
    lambda_u: float = field(init=False)
    lambda_s: float = field(init=False)
    dir_u: np.ndarray = field(init=False, repr=False, compare=False)
    dir_s: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.shape != (2, 2) or not np.all(np.asarray(m, dtype=float) == np.round(m)):
            raise UsageError("matrix must be 2x2 with integer entries")
        m = m.astype(np.int64)
        det = int(round(np.linalg.det(m)))
        if abs(det) != 1:
            raise UsageError(f"matrix must be unimodular, det = {det}")
        tr = int(m[0, 0] + m[1, 1])
        disc = tr * tr - 4 * det
        if disc <= 0:
            raise UsageError("matrix has no real eigenvalues")
        r = math.sqrt(disc)
        l1, l2 = (tr + r) / 2, (tr - r) / 2
        lu, ls = (l1, l2) if abs(l1) > abs(l2) else (l2, l1)
        if not abs(ls) < 1 < abs(lu):
            raise UsageError("matrix is not hyperbolic")
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in row) for row in m))
        object.__setattr__(self, "lambda_u", lu)
        object.__setattr__(self, "lambda_s", ls)
        object.__setattr__(self, "dir_u", _eigvec(m, lu))
        object.__setattr__(self, "dir_s", _eigvec(m, ls))

    @property
    def space(self) -> ModelSpace:
        return TORUS

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def power(self, n: int) -> np.ndarray:
        """Exact integer matrix M^n (negative n through the adjugate)."""
        (a, b), (c, d) = self.matrix
        base = np.array(self.matrix, dtype=object)
        if n < 0:
            base = np.array([[d, -b], [-c, a]], dtype=object) * self.det
        out = np.array([[1, 0], [0, 1]], dtype=object)
        for _ in range(abs(n)):
            out = out.dot(base)
        return out

    def lift(self, x, n: int = 1) -> np.ndarray:
        """Apply M^n to lifted coordinates without reducing."""
        P = self.power(n).astype(float)
        return np.asarray(x, dtype=float) @ P.T

    def direction(self, kind: str) -> np.ndarray:
        if kind not in ("stable", "unstable"):
            raise UsageError(f"unknown foliation {kind!r}")
        return self.dir_s if kind == "stable" else self.dir_u


@dataclass(frozen=True)
class PillowcaseSystem:
    """The quotient of a toral automorphism by x -> -x; linear maps commute with -id."""

    base: ToralAutomorphism = field(default_factory=ToralAutomorphism)

    @property
    def space(self) -> ModelSpace:
        return PILLOWCASE

    def __getattr__(self, name):
        # eigen-data and matrix powers are those of the covering map
        if name in ("matrix", "lambda_u", "lambda_s", "dir_u", "dir_s", "det", "power", "lift", "direction"):
            return getattr(self.base, name)
        raise AttributeError(name)


CAT_MAP = ToralAutomorphism()


def get_system(space: str = "torus", matrix=((2, 1), (1, 1))):
    base = ToralAutomorphism(tuple(tuple(r) for r in matrix))
    if space == "torus":
        return base
    if space == "pillowcase":
        return PillowcaseSystem(base)
    raise UsageError(f"no Anosov system on {space!r}")


def apply(system, p, n: int = 1) -> Point:
    """f^n(p), computed on the lift and reduced to the canonical representative."""
    space = system.space
    x = space.as_coords(p)
    return Point(space, tuple(space.canonical(system.lift(x, n))))


def fold_segment(p0, p1):
    """Sub-segment of the lifted segment [p0, p1] with the same pillowcase image.

    A straight lifted segment of irrational slope meets at most one
    half-lattice point.  Folding there, the image of the segment is the
    image of its longer side.  Returns (q0, q1).
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    d = p1 - p0
    L = float(np.hypot(*d))
    if L == 0:
        return p0, p1
    u = d / L
    lo = np.floor(2 * np.minimum(p0, p1)) - 1
    hi = np.ceil(2 * np.maximum(p0, p1)) + 1
    for i in np.arange(lo[0], hi[0] + 1):
        # the line crosses x = i / 2 once (unless vertical); check the y there
        if abs(u[0]) < 1e-15:
            break
        t = (i / 2 - p0[0]) / u[0]
        if not (1e-12 < t < L - 1e-12):
            continue
        y = p0[1] + t * u[1]
        if abs(2 * y - round(2 * y)) < 2e-12:
            fold = p0 + t * u
            return (fold, p0) if t >= L - t else (fold, p1)
    return p0, p1


def straight_arc(system, x, L: float, direction: str = "stable", gauge: float = 0.01,
                 offset: float = 0.0) -> PolylineArc:
    """Straight leaf arc of length L centred at x + offset * dir.

    On the pillowcase the lift is folded at a cone point if it meets one, so the
    returned arc is the image and may be shorter than L.
    """
    if L < 0:
        raise UsageError("length must be nonnegative")
    space = system.space
    c = np.asarray(space.as_coords(x), dtype=float)
    u = system.direction(direction)
    mid = c + offset * u
    p0, p1 = mid - 0.5 * L * u, mid + 0.5 * L * u
    if space.kind == "pillowcase":
        p0, p1 = fold_segment(p0, p1)
    return PolylineArc.segment(space, p0, p1, gauge)


def stable_arc(system, x, L: float, gauge: float = 0.01, offset: float = 0.0) -> PolylineArc:
    return straight_arc(system, x, L, "stable", gauge, offset)


def unstable_arc(system, x, L: float, gauge: float = 0.01, offset: float = 0.0) -> PolylineArc:
    return straight_arc(system, x, L, "unstable", gauge, offset)


def check_budget(system, length: float, n: int):
    stretch = abs(system.lambda_u) ** abs(n) * length
    if stretch > LIFT_BUDGET:
        raise PrecisionError(
            f"iterate n={n} stretches a lifted arc of length {length:g} to ~{stretch:.3g} > {LIFT_BUDGET:g}"
        )


def iterate_arc(system, a: PolylineArc, n: int, h: float) -> PolylineArc:
    """f^n(a) on lifts, shifted by an integer vector near the origin and resampled to gauge h."""
    if a.space != system.space:
        raise UsageError("arc and map live in different spaces")
    check_budget(system, a.length, n)
    v = system.lift(a.lifted_vertices, n)
    v = v - np.floor(v[0])
    out = PolylineArc.from_points(a.space, v, min(h, 0.25))
    return resample(out, h) if h < out.gauge else out


def translate_arc(system, a: PolylineArc, x, y) -> PolylineArc:
    """The leaf arc through y obtained by translating the arc through x.

    On the torus this is a + (y - x) with the translate chosen near a.  On the
    pillowcase y is lifted to whichever of y, -y is closer to x, and the translate
    is folded at a cone point if its lift meets one, so its length can drop.
    """
    space = a.space
    xs = np.asarray(space.as_coords(x), dtype=float)
    ys = np.asarray(space.as_coords(y), dtype=float)
    if space.kind == "pillowcase":
        # the lift of a passes through x or through -x; use whichever it does
        near = TORUS.dist(a.lifted_vertices[None, :, :], np.stack([xs, -xs])[:, None, :]).min(axis=1)
        xs = xs if near[0] <= near[1] else -xs
        cands = [ys - xs, -ys - xs]
    else:
        cands = [ys - xs]
    cands = [c - np.round(c) for c in cands]
    delta = min(cands, key=lambda c: float(np.hypot(*c)))
    moved = a.translate(delta)
    if space.kind != "pillowcase":
        return moved
    v = moved.lifted_vertices
    q0, q1 = fold_segment(v[0], v[-1])
    if np.array_equal(q0, v[0]) and np.array_equal(q1, v[-1]):
        return moved
    return PolylineArc.segment(space, q0, q1, a.gauge)
