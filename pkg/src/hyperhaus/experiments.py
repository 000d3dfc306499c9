"""Numerical checks on the concrete systems: convergence series, covering radii,
mixing and density probes, separation of the foliation families, cw-expansivity,
and the small examples on the interval, circle and square.

Every routine is deterministic given its arguments (random draws come from an
explicit seed).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, cKDTree

from . import _kernels as K
from .budget import ErrorBudget
from .continua import PolylineArc, SampledContinuum, diameter, kernel_points
from .dynamics import check_budget, iterate_arc, stable_arc
from .hyper import (
    circle_arc,
    full_circle,
    interval_arc,
    marked_hypercircle,
    square_boundary,
    square_gap_arc,
    stable_family,
    unstable_family,
)
from .metrics import (
    GridIndex,
    _directional,
    _sparse_window_min,
    directed_points,
    enumerate_iA,
    hausdorff,
    hausdorff_points,
    hyper_distance,
    second_order_distance,
)
from .spaces import UsageError, get_space

__all__ = [
    "ConvergenceSeries",
    "RunManifest",
    "convergence_experiment",
    "covering_radius_series",
    "mixing_probe",
    "MixingReport",
    "density_probe",
    "separation_probe",
    "cwe_probe",
    "CweReport",
    "demo",
    "DemoResult",
    "density_threshold",
    "mean_ratio",
    "oracle_equivalence",
    "random_polyline",
    "family_to_arc",
    "covering_radius",
]


@dataclass
class ConvergenceSeries:
    """A sequence of distances D_n, each with its error budget."""

    label: str
    indices: list
    values: list
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise UsageError("indices must be strictly increasing")
        if len(self.indices) != len(self.values):
            raise UsageError("one value per index")

    def csv_rows(self) -> list:
        return ["n,value,slack"] + [f"{n},{v.csv()}" for n, v in zip(self.indices, self.values)]

    def value_at(self, n: int) -> ErrorBudget:
        return self.values[self.indices.index(n)]

    def eventually_decreasing(self, start: int) -> bool:
        """D_{n+1} <= D_n + slack_n for every n >= start."""
        pairs = [(a, b) for i, (a, b) in enumerate(zip(self.values, self.values[1:])) if self.indices[i] >= start]
        return all(b.value <= a.value + a.slack for a, b in pairs)


@dataclass
class RunManifest:
    name: str
    config: dict
    started: str = ""
    finished: str = ""
    outputs: list = field(default_factory=list)
    version: str = ""
    elapsed_s: float = 0.0

    def as_dict(self) -> dict:
        return {"name": self.name, "config": self.config, "started": self.started,
                "finished": self.finished, "elapsed_s": self.elapsed_s, "outputs": self.outputs,
                "version": self.version}


# ---------------------------------------------------------------------------
# convergence of i(f^{-n}(A)) towards the stable hyper-family
# ---------------------------------------------------------------------------


def _straight_bounds(space, fam, Bg, lift0, direction, k: int = 16):
    """Upper bounds on min over windows D of d_H(element, D), one per straight family element.

    Both the element and the iterated arc are straight leaf segments.  For
    each of the k samples of B nearest the element's centre, the window
    running parallel to the element from there is at most
    sqrt(offset^2 + end-mismatch^2) away, plus half the larger sample spacing;
    the bound is the best of these.
    """
    st = fam.straight
    centres, half = st["centre"], st["half"]
    uc, inv = np.unique(centres, axis=0, return_inverse=True)
    inv = np.asarray(inv).ravel()
    step = Bg.step
    Mseg = Bg.count - 1
    pillow = space.kind == "pillowcase"
    B = np.mod(kernel_points(Bg.points), 1.0)
    owner = np.arange(B.shape[0])
    if pillow:
        B = np.concatenate([B, np.mod(-B, 1.0)])
        owner = np.concatenate([owner, owner])
    k = min(k, B.shape[0])
    _, nb = cKDTree(B, boxsize=1.0).query(np.mod(uc, 1.0), k=k)
    kk = owner[np.asarray(nb).reshape(uc.shape[0], k)]  # (U, k)
    Q = lift0[None, None, :] + (kk * step)[:, :, None] * direction[None, None, :]
    best_r = None
    for sgn in ([1.0, -1.0] if pillow else [1.0]):
        r = sgn * uc[:, None, :] - Q
        r = r - np.round(r)
        if best_r is None:
            best_r = r
        else:
            swap = np.hypot(r[..., 0], r[..., 1]) < np.hypot(best_r[..., 0], best_r[..., 1])
            best_r = np.where(swap[..., None], r, best_r)
    normal = np.array([-direction[1], direction[0]])
    perp = np.abs(best_r @ normal)[inv]  # (E, k)
    along = ((best_r @ direction) + kk * step)[inv]
    alpha, beta = along - half[:, None], along + half[:, None]
    lo = np.clip(np.rint(alpha / step), 0, Mseg) * step
    hi = np.clip(np.rint(beta / step), 0, Mseg) * step
    delta = np.maximum(np.abs(lo - alpha), np.abs(hi - beta))
    return np.hypot(perp, delta).min(axis=1) + max(step, fam.gauge) / 2 + 1e-9


def family_to_arc(fam, arc: PolylineArc, grid: float, ub=None) -> tuple:
    """sup over family elements e of min over grid windows D of ``arc`` of d_H(e, D).

    Elements are visited by decreasing upper bound and skipped once the bound
    falls to the running maximum, so only a few are solved exactly.  Returns
    (value, number of elements solved).
    """
    space = fam.space
    Bg = arc.on_grid(grid)
    index = GridIndex(space, Bg.points)
    pts, ofs = fam._arc_blocks()
    if ub is None:
        ub = np.full(fam.n_arcs, 4.0 * space.ambient_diameter)
    cmax = -1.0
    solved = 0
    if fam.includes_ambient:
        cmax, _ = _sparse_window_min(space, fam.ambient.points, False, Bg, index)
        solved += 1
    order = np.argsort(-ub, kind="stable").astype(np.int64)
    cmax, k = K.family_sup(space.code, pts, ofs, order, np.ascontiguousarray(ub, dtype=float), float(cmax),
                           Bg.count, Bg.cyclic, *index._args())
    return float(cmax), solved + int(k)


def density_threshold(system, fam, eps: float, arcs_per_length: int = 16, seed: int = 0):
    """Smallest ladder length whose arcs are eps/2-dense in the ambient sample, or None.

    Measured on a few arcs per length; recorded alongside a convergence run.
    """
    rng = np.random.default_rng(seed)
    amb = fam.ambient if fam.ambient is not None else SampledContinuum.ambient(system.space, 0.025)
    idx_pts = amb.points
    for L in fam.meta.get("ladder", []):
        if L == 0:
            continue
        worst = 0.0
        for _ in range(arcs_per_length):
            a = stable_arc(system, system.space.random_points(rng, 1)[0], L, gauge=0.01)
            worst = max(worst, GridIndex(system.space, a.samples()).directed_from(idx_pts))
            if worst > eps / 2:
                break
        if worst <= eps / 2:
            return float(L)
    return None


def convergence_experiment(system, x0=(0.1, 0.2), L0: float = 0.05, n_max: int = 10, grid: float = 0.01,
                           base_grid: int = 32, ladder=None, L_max: float = 2.0, label: str | None = None,
                           family=None) -> ConvergenceSeries:
    """D_n = distance from the stable family to i(f^{-n}(A0)), n = 0..n_max.

    Each family element is matched with its best grid subarc of the iterated
    arc, and the ambient member with its best subarc as well.  The opposite
    direction vanishes for the ideal family, which contains every subarc of
    every stable leaf, so it is not measured against the truncated ladder.
    """
    if L0 <= 0:
        raise UsageError("the initial arc must be non-trivial")
    space = system.space
    check_budget(system, L0, n_max)
    fam = family if family is not None else stable_family(system, base_grid, ladder, L_max, gauge=grid)
    A0 = stable_arc(system, x0, L0, gauge=grid)
    values = []
    solved = []
    for n in range(n_max + 1):
        An = iterate_arc(system, A0, -n, grid)
        v0 = An.lifted_vertices
        direction = (v0[-1] - v0[0]) / np.hypot(*(v0[-1] - v0[0]))
        ub = _straight_bounds(space, fam, An.on_grid(grid), v0[0], direction)
        v, k = family_to_arc(fam, An, grid, ub)
        values.append(ErrorBudget(v, grid + fam.gauge + An.gauge + fam.resolution))
        solved.append(k)
    config = {
        "space": space.kind, "matrix": [list(r) for r in system.matrix], "x0": list(map(float, x0)),
        "L0": L0, "n_max": n_max, "grid": grid, "base_grid": fam.meta.get("base_grid", base_grid),
        "L_max": fam.meta.get("L_max", L_max), "ladder_step": _ladder_step(fam),
        "resolution": fam.resolution, "solved_exactly": solved,
    }
    return ConvergenceSeries(label or f"converge-{space.kind}", list(range(n_max + 1)), values, config)


def _ladder_step(fam):
    lad = fam.meta.get("ladder", [])
    return float(np.max(np.diff(lad))) if len(lad) > 1 else 0.0


# ---------------------------------------------------------------------------
# covering radius of f^{-n}(A0)
# ---------------------------------------------------------------------------


class _SegmentIndex:
    """Short pieces of a lifted polyline, bucketed by midpoint on the torus."""

    def __init__(self, lifted: np.ndarray, piece: float = 0.02):
        a, b = lifted[:-1], lifted[1:]
        seg = np.hypot(*(b - a).T)
        k = np.maximum(1, np.ceil(seg / piece)).astype(np.int64)
        starts = np.repeat(a, k, axis=0)
        step = np.repeat((b - a) / k[:, None], k, axis=0)
        j = np.concatenate([np.arange(m) for m in k])[:, None]
        p0 = starts + j * step
        mids = p0 + 0.5 * step
        self.mids = np.ascontiguousarray(np.mod(mids, 1.0))
        self.halfs = np.ascontiguousarray(0.5 * step)
        self.hmax = float(np.hypot(*self.halfs.T).max()) if len(self.halfs) else 0.0
        n = int(min(512, max(1, math.sqrt(len(self.mids) / 2))))
        self.n = n
        self.order, self.starts = K.grid_build(self.mids[:, 0].copy(), self.mids[:, 1].copy(), n, n, 0.0, 1.0, 0.0, 1.0)

    def distance(self, Q, pillow: bool) -> np.ndarray:
        return K.polyline_distance_many(kernel_points(Q), pillow, self.mids, self.halfs, self.order, self.starts,
                                        self.n, self.hmax)


def _polyline_samples(lifted: np.ndarray, spacing: float) -> np.ndarray:
    a, b = lifted[:-1], lifted[1:]
    k = np.maximum(1, np.ceil(np.hypot(*(b - a).T) / spacing)).astype(np.int64)
    j = np.concatenate([np.arange(m) for m in k])[:, None] / np.repeat(k, k)[:, None]
    pts = np.repeat(a, k, axis=0) + j * np.repeat(b - a, k, axis=0)
    return np.mod(np.concatenate([pts, lifted[-1:]]), 1.0)


def _largest_empty_circle(P: np.ndarray, margin: float) -> tuple:
    """Centre and radius of the largest disc on the torus avoiding the point set P.

    The distance to P peaks at a Voronoi vertex, i.e. a Delaunay circumcentre
    of the periodically extended set; candidates are checked for emptiness
    against the periodic tree, largest first.
    """
    shifts = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)
    tiles = [P + sh for sh in shifts]
    T = np.concatenate(tiles)
    T = T[np.all((T > -margin) & (T < 1 + margin), axis=1)]
    tri = Delaunay(T, qhull_options="QJ Qbb")
    A, B, C = (T[tri.simplices[:, i]] for i in range(3))
    b, c = B - A, C - A
    den = 2 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    with np.errstate(divide="ignore", invalid="ignore"):
        ux = (c[:, 1] * (b ** 2).sum(1) - b[:, 1] * (c ** 2).sum(1)) / den
        uy = (b[:, 0] * (c ** 2).sum(1) - c[:, 0] * (b ** 2).sum(1)) / den
    centre = A + np.stack([ux, uy], axis=1)
    radius = np.hypot(ux, uy)
    inside = np.isfinite(radius) & np.all((centre >= 0) & (centre < 1), axis=1)
    centre, radius = centre[inside], radius[inside]
    tree = cKDTree(P, boxsize=1.0)
    order = np.argsort(-radius, kind="stable")
    for start in range(0, order.size, 256):
        sel = order[start:start + 256]
        d, _ = tree.query(centre[sel])
        good = np.nonzero(d >= radius[sel] * (1 - 1e-9))[0]
        if good.size:
            i = sel[good[0]]
            return centre[i], float(d[good[0]])
    raise RuntimeError("no empty circumcircle found")


def covering_radius(space, lifted: np.ndarray, tol: float = 0.01) -> ErrorBudget:
    """sup over the space of the distance to the projected polyline ``lifted``.

    The polyline is sampled with spacing s; the largest empty disc of the
    samples bounds the answer from above, and the exact polyline distance at
    its centre bounds it from below.  s shrinks until the two agree to ``tol``
    relative; the value is the lower bound and the slack the gap.
    """
    pillow = space.kind == "pillowcase"
    idx = _SegmentIndex(lifted)
    total = float(np.hypot(*np.diff(lifted, axis=0).T).sum())
    # strands of a long arc sit roughly 1/length apart
    spacing = min(0.01, 0.15 / max(total, 1e-9))
    margin = min(1.0, 0.05 + 4 / max(total, 1e-9))
    while True:
        P = _polyline_samples(lifted, spacing)
        if pillow:
            P = np.mod(np.concatenate([P, -P]), 1.0)
        c, upper = _largest_empty_circle(P, margin)
        if margin < min(1.0, 2 * upper + spacing):
            # the periodic padding was too thin to expose every circumcircle
            margin = min(1.0, 2 * upper + spacing)
            continue
        lower = float(idx.distance(c[None, :], pillow)[0])
        if upper - lower <= tol * lower:
            return ErrorBudget(lower, upper - lower)
        spacing = min(spacing / 2, 0.9 * upper * math.sqrt(8 * tol))


def covering_radius_series(system, x0=(0.1, 0.2), L0: float = 0.05, n_max: int = 9,
                           tol: float = 0.01) -> ConvergenceSeries:
    """r_n = sup over the space of the distance to f^{-n}(A0)."""
    check_budget(system, L0, n_max)
    A0 = stable_arc(system, x0, L0, gauge=0.01)
    ends = A0.lifted_vertices[[0, -1]]
    vals = []
    for n in range(n_max + 1):
        vals.append(covering_radius(system.space, system.lift(ends, -n), tol))
    config = {"space": system.space.kind, "x0": list(map(float, x0)), "L0": L0, "n_max": n_max, "tol": tol}
    return ConvergenceSeries(f"cover-{system.space.kind}", list(range(n_max + 1)), vals, config)


def mean_ratio(series: ConvergenceSeries, lo: int, hi: int) -> float:
    """Mean of r_{n+1} / r_n over n = lo..hi."""
    v = {n: b.value for n, b in zip(series.indices, series.values)}
    return float(np.mean([v[n + 1] / v[n] for n in range(lo, hi + 1)]))


# ---------------------------------------------------------------------------
# mixing and density
# ---------------------------------------------------------------------------


def _rational_orbit(system, num: np.ndarray, den: int, n_max: int) -> np.ndarray:
    """Exact orbit of the points num / den (integer rows) under the map, as floats in [0, 1)."""
    m = np.array(system.matrix, dtype=np.int64)
    out = np.empty((num.shape[0], n_max + 1, 2))
    cur = np.mod(num.astype(np.int64), den)
    for n in range(n_max + 1):
        out[:, n, :] = cur / den
        cur = np.mod(cur @ m.T, den)
    return out


MIXING_HALF_CAP = 1e4


@dataclass
class MixingReport:
    cells: int
    window: int
    first_n: np.ndarray  # first_n[u, v], -1 when not found
    n_cap: int

    @property
    def max_n(self) -> int:
        return int(self.first_n.max()) if np.all(self.first_n >= 0) else -1

    @property
    def failures(self) -> int:
        return int(np.sum(self.first_n < 0))


def mixing_probe(system, cells: int = 8, window: int = 10, n_cap: int = 40) -> MixingReport:
    """For each ordered cell pair (U, V), the least N with U meeting f^n(arc in V) for all n in [N, N + window].

    V is represented by the unstable arc of length half the cell width through
    its centre; its images are unstable arcs through the exactly computed orbit
    of the centre.
    """
    if cells < 2:
        raise UsageError("need at least 2 cells per side")
    lam = abs(system.lambda_u)
    n_top = n_cap + window
    i, j = np.meshgrid(np.arange(cells), np.arange(cells), indexing="ij")
    num = np.stack([2 * i.ravel() + 1, 2 * j.ravel() + 1], axis=1)
    orbit = _rational_orbit(system, num, 2 * cells, n_top)
    # hitting is monotone in the length, so capping it only risks reporting a miss
    half = np.minimum((0.25 / cells) * lam ** np.arange(n_top + 1), MIXING_HALF_CAP)
    d = system.dir_u
    hits = K.mixing_hits(cells, orbit, float(d[0]), float(d[1]), half, system.space.kind == "pillowcase")
    nc = cells * cells
    first = np.full((nc, nc), -1, dtype=np.int64)
    # ok[u, v, N]: every n in [N, N + window] hits
    win = np.lib.stride_tricks.sliding_window_view(hits, window + 1, axis=2)
    ok = win.all(axis=3)[:, :, : n_cap + 1]
    has = ok.any(axis=2)
    first[has] = np.argmax(ok, axis=2)[has]
    return MixingReport(cells, window, first, n_cap)


def density_probe(system, x=(0.1, 0.2), n_max: int = 12, cells: int = 16, delta: float = 0.1) -> float:
    """Fraction of cells met by the union over n <= n_max of f^{-n}(stable arc of length delta through f^n(x)).

    The pieces are nested stable arcs through x, so the union is the one of
    length delta * lambda_u^n_max.
    """
    space = system.space
    c = np.asarray(space.canonical(np.asarray(x, dtype=float)), dtype=float)
    half = 0.5 * delta * abs(system.lambda_u) ** n_max
    d = system.dir_s
    w = 1.0 / cells
    hit = 0
    for a in range(cells):
        for b in range(cells):
            h = K.segment_hits_cell(c[0], c[1], d[0], d[1], half, a * w, (a + 1) * w, b * w, (b + 1) * w)
            if not h and space.kind == "pillowcase":
                h = K.segment_hits_cell(c[0], c[1], d[0], d[1], half, 1 - (a + 1) * w, 1 - a * w,
                                        1 - (b + 1) * w, 1 - b * w)
            hit += bool(h)
    return hit / cells**2


# ---------------------------------------------------------------------------
# separation of the stable and unstable families
# ---------------------------------------------------------------------------


def _one_cell(fam) -> np.ndarray:
    """Indices of the elements centred on the first base point."""
    c = fam.straight["centre"]
    return np.nonzero(np.all(c == c[0], axis=1))[0]


def separation_probe(system, base_grid: int = 32, ladder=None, L_max: float = 2.0,
                     gauge: float = 0.01) -> ErrorBudget:
    """Distance between the stable and unstable families with the shared ambient member removed.

    Both families contain the whole space, which would make the distance
    collapse; the separation concerns the arcs.  On the torus both families
    are invariant under the base-grid translations, so the sup over elements
    only needs the elements centred on one base point.
    """
    Fs = stable_family(system, base_grid, ladder, L_max, gauge, ambient=False)
    Fu = unstable_family(system, base_grid, ladder, L_max, gauge, ambient=False)
    if system.space.kind != "torus":
        return hyper_distance(Fs, Fu)
    v = max(_directional(Fs, Fu, "fast", _one_cell(Fs)), _directional(Fu, Fs, "fast", _one_cell(Fu)))
    return ErrorBudget(v, Fs.resolution + Fu.resolution)


# ---------------------------------------------------------------------------
# continuum-wise expansivity
# ---------------------------------------------------------------------------


@dataclass
class CweReport:
    delta: float
    max_iter: int
    needed: np.ndarray  # per arc, smallest |n| reaching diameter > delta, or -1
    diameters: np.ndarray

    @property
    def all_pass(self) -> bool:
        return bool(np.all((self.needed >= 0) & (self.needed <= self.max_iter)))

    @property
    def worst(self) -> int:
        return int(self.needed.max()) if np.all(self.needed >= 0) else -1


def _random_arc(space, rng, min_diam):
    while True:
        k = int(rng.integers(2, 7))
        scale = 10 ** rng.uniform(-3, -1.3)
        steps = rng.normal(size=(k - 1, 2)) * scale
        start = rng.uniform(0, 1, 2)
        v = np.concatenate([[start], start + np.cumsum(steps, axis=0)])
        a = PolylineArc.from_points(space, v, 0.01)
        if diameter(a).value >= min_diam:
            return a


def _image_diameter(system, a: PolylineArc, n: int) -> float:
    v = system.lift(a.lifted_vertices, n)
    img = PolylineArc.from_points(system.space, v - np.floor(v[0]), 0.01)
    return diameter(img).value


def cwe_probe(system, n_arcs: int = 200, delta: float = 0.1, max_iter: int = 6, min_diam: float = 1e-3,
              seed: int = 0) -> CweReport:
    """For random arcs of diameter >= min_diam, the least |n| <= max_iter with diam f^n(A) > delta."""
    rng = np.random.default_rng(seed)
    needed = np.full(n_arcs, -1, dtype=np.int64)
    diams = np.zeros(n_arcs)
    for i in range(n_arcs):
        a = _random_arc(system.space, rng, min_diam)
        diams[i] = diameter(a).value
        for k in range(max_iter + 1):
            if max(_image_diameter(system, a, k), _image_diameter(system, a, -k)) > delta:
                needed[i] = k
                break
    return CweReport(delta, max_iter, needed, diams)


# ---------------------------------------------------------------------------
# examples on the interval, the circle and the square
# ---------------------------------------------------------------------------


@dataclass
class DemoResult:
    name: str
    columns: list
    rows: list
    passed: bool
    summary: str

    def csv_rows(self) -> list:
        return [",".join(self.columns)] + [",".join(_fmt(x) for x in r) for r in self.rows]


def _fmt(x):
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _demo_interval(grid=0.01, pairs=200, seed=0):
    rng = np.random.default_rng(seed)
    rows, worst = [], 0.0
    for _ in range(pairs):
        a = np.sort(rng.uniform(0, 1, 2))
        b = np.sort(rng.uniform(0, 1, 2))
        A, B = interval_arc(*a, gauge=grid), interval_arc(*b, gauge=grid)
        model = float(max(abs(a[0] - b[0]), abs(a[1] - b[1])))
        d2 = second_order_distance(A, B, grid).value
        dh = hausdorff(A, B).value
        dev = abs(d2 - model)
        worst = max(worst, dev)
        rows.append([float(a[0]), float(a[1]), float(b[0]), float(b[1]), dh, d2, model, dev <= 2 * grid])
    ok = worst <= 2 * grid
    return DemoResult("interval", ["a0", "a1", "b0", "b1", "hausdorff", "second_order", "model", "ok"], rows, ok,
                      f"interval: max |second_order - model| = {worst:.6g} (bound {2 * grid:g})")


def _demo_circle(grid=0.005, ns=(2, 4, 8, 16, 32), mark=0.3):
    S = full_circle(grid, mark)
    iS = enumerate_iA(S, grid)
    mh = marked_hypercircle(mark, grid)
    rows, ok = [], True
    for n in ns:
        A = circle_arc(mark, 1 - 1 / n, grid)
        iA = enumerate_iA(A, grid)
        to_marked = hyper_distance(iA, mh).value
        to_circle = hyper_distance(iA, iS).value
        dh = hausdorff(A, S)
        c1 = to_marked <= 1 / n + 2 * grid
        c2 = to_circle >= 0.25 - 1 / n - 2 * grid
        c3 = abs(dh.value - 1 / (2 * n)) <= grid
        ok &= c1 and c2 and c3
        rows.append([n, to_marked, 1 / n + 2 * grid, to_circle, 0.25 - 1 / n - 2 * grid, dh.value, 1 / (2 * n),
                     c1 and c2 and c3])
    cols = ["n", "to_marked", "marked_bound", "to_circle", "circle_bound", "hausdorff", "hausdorff_model", "ok"]
    return DemoResult("circle", cols, rows, ok, f"circle: {'all' if ok else 'not all'} bounds hold for n in {list(ns)}")


def _demo_square(r=0.05, grid=0.02):
    B = square_boundary(grid)
    A = square_gap_arc(r, grid)
    dh = hausdorff(A, B).value
    d2 = second_order_distance(A, B, grid).value
    c1 = dh <= r / 2 + grid
    c2 = d2 >= 0.2
    rows = [[r, grid, dh, r / 2 + grid, d2, 0.2, c1 and c2]]
    cols = ["gap", "grid", "hausdorff", "hausdorff_bound", "second_order", "second_order_floor", "ok"]
    return DemoResult("square-gap", cols, rows, c1 and c2,
                      f"square-gap: d_H = {dh:.6g}, second-order = {d2:.6g}")


def demo(name: str, **params) -> DemoResult:
    """Run one of the examples: 'interval', 'circle' or 'square-gap'."""
    table = {"interval": _demo_interval, "circle": _demo_circle, "square-gap": _demo_square}
    if name not in table:
        raise UsageError(f"unknown demo {name!r}; choose from {sorted(table)}")
    return table[name](**params)


# ---------------------------------------------------------------------------
# fast engines against brute force
# ---------------------------------------------------------------------------


def random_polyline(space, rng, max_vertices: int = 30, step: float = 0.06) -> PolylineArc:
    """Random walk polyline with at most ``max_vertices`` vertices and steps below ``step``."""
    n = int(rng.integers(1, max_vertices + 1))
    start = space.random_points(rng, 1)[0]
    walk = np.cumsum(rng.uniform(-step, step, (n, space.dim)), axis=0) + start
    if space.kind in ("interval", "square"):
        walk = np.clip(walk, 0, 1)
    return PolylineArc.from_points(space, walk, step * math.sqrt(space.dim))


def oracle_equivalence(pairs: int = 50, max_points: int = 2000, seed: int = 0) -> dict:
    """Largest deviation of the fast engines from brute force on random inputs.

    Returns {quantity: (pairs, max deviation, tolerance)}.
    """
    rng = np.random.default_rng(seed)
    spaces = [get_space(k) for k in ("interval", "circle", "torus", "pillowcase", "square")]
    dev_h = dev_d = 0.0
    for i in range(pairs):
        sp = spaces[i % len(spaces)]
        P = sp.random_points(rng, int(rng.integers(1, max_points + 1)))
        Q = sp.random_points(rng, int(rng.integers(1, max_points + 1)))
        dev_h = max(dev_h, abs(hausdorff_points(sp, P, Q) - hausdorff_points(sp, P, Q, "brute")))
        dev_d = max(dev_d, abs(directed_points(sp, P, Q) - directed_points(sp, P, Q, "brute")))
    dev_2 = 0.0
    for i in range(pairs):
        sp = spaces[i % len(spaces)]
        A, B = random_polyline(sp, rng), random_polyline(sp, rng)
        g = float(rng.choice([0.02, 0.03, 0.05]))
        fast = second_order_distance(A, B, g).value
        dev_2 = max(dev_2, abs(fast - second_order_distance(A, B, g, "brute").value))
    return {"hausdorff": (pairs, dev_h, 1e-12), "directed_hausdorff": (pairs, dev_d, 1e-12),
            "second_order": (pairs, dev_2, 1e-9)}

