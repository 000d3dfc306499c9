"""Hausdorff distance, second-order Hausdorff distance and distances between hyper-families.

Every public routine takes ``method="fast"`` (default) or ``method="brute"``.
The brute-force path is plain numpy over all pairs and all grid windows; it is
the oracle the fast path is tested against.

Sub-continua of an arc are the grid windows of its uniform arc-length sample:
sample indices ``lo, lo+1, ..., lo+w`` (taken cyclically on closed loops).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels as K
from .budget import ErrorBudget
from .continua import GridSamples, PolylineArc, SampledContinuum, kernel_points
from .spaces import ModelSpace, UsageError

__all__ = [
    "GridIndex",
    "directed_hausdorff",
    "hausdorff",
    "hausdorff_points",
    "directed_points",
    "subarc_infimum",
    "second_order_distance",
    "hyper_distance",
    "enumerate_iA",
    "window_count",
]


# ---------------------------------------------------------------------------
# grid index
# ---------------------------------------------------------------------------


class GridIndex:
    """Uniform bucket grid over the canonical points of a space, for nearest and ball queries.

    On the pillowcase each point is stored twice (as q and -q mod 1) so the
    ring search can run in torus coordinates.
    """

    def __init__(self, space: ModelSpace, points, cells_per_point: float = 0.5):
        self.space = space
        self.kind = space.code
        self.pts = kernel_points(points)
        n = self.pts.shape[0]
        if n == 0:
            raise UsageError("cannot index an empty set")
        owner = np.arange(n, dtype=np.int64)
        gx, gy = self.pts[:, 0], self.pts[:, 1]
        if space.kind == "pillowcase":
            gx = np.concatenate([gx, np.mod(-gx, 1.0)])
            gy = np.concatenate([gy, np.mod(-gy, 1.0)])
            owner = np.concatenate([owner, owner])
        self.owner = owner
        self.gx = np.ascontiguousarray(gx)
        self.gy = np.ascontiguousarray(gy)
        ncell = max(1, int(len(gx) * cells_per_point))
        if space.dim == 1:
            self.nx, self.ny = min(max(ncell, 1), 1 << 16), 1
        else:
            side = min(max(int(math.sqrt(ncell)), 1), 1024)
            self.nx = self.ny = side
        self.periodic = space.periodic
        self.box = (0.0, 1.0, 0.0, 1.0)
        self.order, self.starts = K.grid_build(self.gx, self.gy, self.nx, self.ny, *self.box)

    def _args(self):
        return (self.pts, self.owner, self.gx, self.gy, self.order, self.starts,
                self.nx, self.ny, *self.box, self.periodic)

    def nearest(self, Q):
        """(distances, indices) of the nearest indexed point to each row of Q."""
        return K.nearest_all(self.kind, kernel_points(Q), *self._args())

    def directed_from(self, Q) -> float:
        """max over Q of the distance to the indexed set."""
        Q = kernel_points(Q)
        perm = np.random.default_rng(0).permutation(Q.shape[0])
        return float(K.directed_grid(self.kind, Q, perm, *self._args()))

    def ball_pairs(self, C, radius: float):
        """(row of C, indexed row, distance) for all pairs within ``radius``, grouped by C row."""
        return K.ball_pairs(self.kind, kernel_points(C), float(radius), *self._args())


# ---------------------------------------------------------------------------
# Hausdorff distance between sample sets
# ---------------------------------------------------------------------------


def _dist_matrix(space: ModelSpace, P, Q) -> np.ndarray:
    P = space.as_coords(P)
    Q = space.as_coords(Q)
    return space.dist(P[:, None, :], Q[None, :, :])


def _directed_brute(space, P, Q, chunk=1024) -> float:
    best = 0.0
    for i in range(0, P.shape[0], chunk):
        best = max(best, float(_dist_matrix(space, P[i:i + chunk], Q).min(axis=1).max()))
    return best


def directed_points(space: ModelSpace, P, Q, method: str = "fast") -> float:
    """max over p in P of min over q in Q of dist(p, q)."""
    # both methods see the same canonical coordinates, so they agree to the bit
    P = space.canonical(P)
    Q = space.canonical(Q)
    if P.shape[0] == 0 or Q.shape[0] == 0:
        raise UsageError("empty continuum")
    if method == "brute":
        return _directed_brute(space, P, Q)
    if method != "fast":
        raise UsageError(f"unknown method {method!r}")
    return GridIndex(space, Q).directed_from(P)


def hausdorff_points(space: ModelSpace, P, Q, method: str = "fast") -> float:
    return max(directed_points(space, P, Q, method), directed_points(space, Q, P, method))


def _check_pair(A, B) -> ModelSpace:
    if A.space != B.space:
        raise UsageError(f"continua live in different spaces ({A.space.kind}, {B.space.kind})")
    return A.space


def directed_hausdorff(A, B, method: str = "fast") -> ErrorBudget:
    """One-sided Hausdorff distance between the samples of A and of B.

    The slack ``gauge(A)/2 + gauge(B)`` bounds the gap to the continua themselves.
    """
    space = _check_pair(A, B)
    v = directed_points(space, A.samples(), B.samples(), method)
    return ErrorBudget(v, A.gauge / 2 + B.gauge)


def hausdorff(A, B, method: str = "fast") -> ErrorBudget:
    space = _check_pair(A, B)
    v = hausdorff_points(space, A.samples(), B.samples(), method)
    return ErrorBudget(v, max(A.gauge / 2 + B.gauge, B.gauge / 2 + A.gauge))


# ---------------------------------------------------------------------------
# best window of an arc
# ---------------------------------------------------------------------------


def window_count(M: int, cyclic: bool) -> int:
    """Number of distinct grid windows on M samples."""
    return M * (M - 1) + 1 if cyclic and M > 1 else M * (M + 1) // 2


def _windows(M: int, cyclic: bool) -> np.ndarray:
    if cyclic and M > 1:
        lo, w = np.meshgrid(np.arange(M), np.arange(M - 1), indexing="ij")
        out = np.stack([lo.ravel(), w.ravel()], axis=1)
        return np.concatenate([out, [[0, M - 1]]]).astype(np.int64)
    rows = [(lo, w) for lo in range(M) for w in range(M - lo)]
    return np.array(rows, dtype=np.int64).reshape(-1, 2)


def _brute_window_min(Dm: np.ndarray, cyclic: bool) -> float:
    """min over windows D of the columns of Dm of the Hausdorff distance (rows vs D)."""
    m, M = Dm.shape
    g = Dm.min(axis=0)
    if cyclic:
        ext = np.concatenate([Dm, Dm], axis=1)
        gext = np.concatenate([g, g])
    else:
        ext, gext = Dm, g
    best = np.inf
    for lo in range(M):
        hi = lo + M - 1 if cyclic else M - 1
        c2d = np.minimum.accumulate(ext[:, lo:hi + 1], axis=1).max(axis=0)
        d2c = np.maximum.accumulate(gext[lo:hi + 1])
        best = min(best, float(np.maximum(c2d, d2c).min()))
    return best


def _samples_of(C, grid):
    if isinstance(C, PolylineArc):
        return C.on_grid(grid).points, True
    if isinstance(C, GridSamples):
        return C.points, True
    return C.samples(), False


def _sparse_window_min(space, Cpts, ordered, Bg: GridSamples, index=None, ub=None, stop=-1.0):
    """Exact min over windows of Bg of d_H(C, window); see ``_kernels.subarc_search``."""
    C = kernel_points(Cpts)
    B = kernel_points(Bg.points)
    M = B.shape[0]
    kind = space.code
    if index is None:
        index = GridIndex(space, Bg.points)
    if ub is None:
        ub = max(index.directed_from(C), GridIndex(space, C).directed_from(B))
        if ordered and M > 1:
            _, near = index.nearest(C[[0, C.shape[0] // 2, -1]])
            k0, km, k1 = (int(x) for x in near)
            cands = [(min(k0, k1), abs(k1 - k0))]
            if Bg.cyclic:
                cands.append((max(k0, k1), (min(k0, k1) - max(k0, k1)) % M))
            half = int(round(C.shape[0] / 2))
            lo = km - half if Bg.cyclic else max(0, km - half)
            hi = km + half if Bg.cyclic else min(M - 1, km + half)
            cands.append((lo % M, min(hi - lo, M - 1)))
            for lo, w in cands:
                if (w + 1) * C.shape[0] <= 4_000_000:
                    ub = min(ub, float(K.window_hausdorff(kind, C, B, lo, w, M, ub)))
    ci, bk, dd = index.ball_pairs(C, ub)
    values = np.unique(dd)
    v, exact = K.subarc_search(C.shape[0], ci, bk, dd, M, Bg.cyclic, values, 0.0, float(stop))
    return float(v), bool(exact)


def subarc_infimum(C, B: PolylineArc, grid: float, method: str = "fast") -> ErrorBudget:
    """min over grid subarcs D of B of d_H(C, D); slack is the grid step plus gauges.

    ``C`` may be an arc (sampled on the same grid) or a sampled continuum.
    """
    space = _check_pair(C, B)
    if grid <= 0:
        raise UsageError("grid must be positive")
    Cpts, ordered = _samples_of(C, grid)
    Bg = B.on_grid(grid)
    if method == "brute":
        v = _brute_window_min(_dist_matrix(space, Cpts, Bg.points), Bg.cyclic)
    elif method == "fast":
        v, _ = _sparse_window_min(space, Cpts, ordered, Bg)
    else:
        raise UsageError(f"unknown method {method!r}")
    return ErrorBudget(v, grid + C.gauge + B.gauge)


# ---------------------------------------------------------------------------
# second-order distance
# ---------------------------------------------------------------------------


def _brute_direction(Dm: np.ndarray, cycA: bool, cycB: bool) -> float:
    """max over windows of the rows of min over windows of the columns, by full enumeration."""
    MA, MB = Dm.shape
    WB = MB
    lo = np.arange(MB)[:, None]
    w = np.arange(WB)[None, :]
    if cycB:
        valid = np.broadcast_to(w <= MB - 1, (MB, WB))
        idx = (lo + w) % MB
    else:
        valid = lo + w <= MB - 1
        idx = np.minimum(lo + w, MB - 1)
    # CM[i, lo, w] = min of row i over the window
    CM = np.minimum.accumulate(Dm[:, idx], axis=2)
    best = -np.inf
    for loA in range(MA):
        wmax = MA - 1 if cycA else MA - 1 - loA
        run_c2d = np.full((MB, WB), -np.inf)
        run_g = np.full(MB, np.inf)
        for wA in range(wmax + 1):
            i = (loA + wA) % MA
            run_c2d = np.maximum(run_c2d, CM[i])
            run_g = np.minimum(run_g, Dm[i])
            d2c = np.maximum.accumulate(run_g[idx], axis=1)
            val = float(np.maximum(run_c2d, d2c)[valid].min())
            best = max(best, val)
    return best


def _grid_pair(A, B, grid):
    Ag = A if isinstance(A, GridSamples) else A.on_grid(grid)
    Bg = B if isinstance(B, GridSamples) else B.on_grid(grid)
    return Ag, Bg


def second_order_samples(space: ModelSpace, Ag: GridSamples, Bg: GridSamples, method: str = "fast") -> float:
    """Second-order distance between two arcs given by their grid samples."""
    Dm = np.ascontiguousarray(_dist_matrix(space, Ag.points, Bg.points))
    if method == "brute":
        return max(_brute_direction(Dm, Ag.cyclic, Bg.cyclic),
                   _brute_direction(np.ascontiguousarray(Dm.T), Bg.cyclic, Ag.cyclic))
    if method != "fast":
        raise UsageError(f"unknown method {method!r}")
    a = K.second_order_direction(Dm, Ag.cyclic, Bg.cyclic, Ag.step)
    b = K.second_order_direction(np.ascontiguousarray(Dm.T), Bg.cyclic, Ag.cyclic, Bg.step)
    return float(max(a, b))


def second_order_distance(A: PolylineArc, B: PolylineArc, grid: float, method: str = "fast") -> ErrorBudget:
    """Second-order Hausdorff distance over grid subarcs of both arcs.

    Symmetric by construction: both directions are evaluated and the larger kept.
    """
    space = _check_pair(A, B)
    if grid <= 0:
        raise UsageError("grid must be positive")
    Ag, Bg = _grid_pair(A, B, grid)
    v = second_order_samples(space, Ag, Bg, method)
    return ErrorBudget(v, 2 * grid + A.gauge + B.gauge)


# ---------------------------------------------------------------------------
# hyper-families
# ---------------------------------------------------------------------------


def enumerate_iA(A: PolylineArc, grid: float):
    """All grid subarcs of A (singletons and A itself included) as a finite family."""
    from .hyper import FiniteHyperFamily

    if grid <= 0:
        raise UsageError("grid must be positive")
    g = A.on_grid(grid)
    return FiniteHyperFamily.from_windows(A.space, g, resolution=grid, gauge=max(g.step, A.gauge) if g.step else A.gauge)


def _landmarks(space: ModelSpace) -> np.ndarray:
    return kernel_points(space.grid_sample(0.2 if space.dim == 2 else 0.08))


def _select(P, pofs, rows):
    sizes = pofs[rows + 1] - pofs[rows]
    idx = np.concatenate([np.arange(pofs[r], pofs[r + 1]) for r in rows])
    return np.ascontiguousarray(P[idx]), np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)


def _directional(F, G, method: str, rows=None) -> float:
    """sup over elements e of F (or its ``rows``) of min over elements g of G of d_H(e, g)."""
    kind = F.space.code
    P, pofs = F.packed()
    if rows is not None:
        P, pofs = _select(P, pofs, np.asarray(rows, dtype=np.int64))
    Q, qofs = G.packed()
    nF, nG = len(pofs) - 1, len(qofs) - 1
    if method == "brute":
        best = -np.inf
        for e in range(nF):
            pe = P[pofs[e]:pofs[e + 1]]
            inner = min(hausdorff_points(F.space, pe[:, :F.space.dim], Q[qofs[g]:qofs[g + 1], :F.space.dim], "brute")
                        for g in range(nG))
            best = max(best, inner)
        return float(best)
    L = _landmarks(F.space)
    fe = K.landmark_features(kind, L, P, pofs)
    fg = K.landmark_features(kind, L, Q, qofs)
    tree = cKDTree(fg)
    k = min(4, nG)
    _, guess = tree.query(fe, k=k, p=np.inf)
    guess = np.asarray(guess).reshape(nF, k)
    ub = np.full(nF, np.inf)
    for j in range(k):
        d = K.hausdorff_many(kind, P, pofs, np.arange(nF), Q, qofs, guess[:, j].astype(np.int64),
                             np.minimum(ub, np.inf))
        ub = np.minimum(ub, d)
    order = np.argsort(-ub, kind="stable")
    cmax = -1.0
    for e in order:
        if ub[e] <= cmax:
            break
        cand = np.asarray(tree.query_ball_point(fe[e], r=ub[e], p=np.inf), dtype=np.int64)
        if cand.size == 0:
            v = ub[e]
        else:
            lbs = np.max(np.abs(fg[cand] - fe[e]), axis=1) - 1e-12
            srt = np.argsort(lbs, kind="stable")
            v = K.best_over_candidates(kind, P, pofs, int(e), Q, qofs, cand[srt], lbs[srt], float(ub[e]), cmax)
        cmax = max(cmax, float(v))
    return cmax


def hyper_distance(F, G, method: str = "fast") -> ErrorBudget:
    """Hausdorff distance between two finite families, with d_H as ground metric.

    Two families of grid windows of arcs (``enumerate_iA`` outputs) are
    compared with the second-order engine on their parent arcs, which is the
    same quantity computed without listing the windows.
    """
    if F.space != G.space:
        raise UsageError("families live in different spaces")
    if len(F) == 0 or len(G) == 0:
        raise UsageError("empty family")
    slack = F.resolution + G.resolution
    if F.parent is not None and G.parent is not None and not (F.includes_ambient or G.includes_ambient):
        v = second_order_samples(F.space, F.parent, G.parent, method)
        return ErrorBudget(v, slack)
    v = max(_directional(F, G, method), _directional(G, F, method))
    return ErrorBudget(v, slack)
