"""Compiled inner loops.

Every routine takes points as an ``(n, 2)`` float array (the second column is
ignored for one-dimensional spaces) and an integer space code, see
``spaces.KIND_CODES``.  The distance formula here must stay in step with
``ModelSpace.dist``; brute-force oracles use the numpy version.
"""

import math

import numpy as np
from numba import njit

INTERVAL, CIRCLE, TORUS, PILLOWCASE, SQUARE = 0, 1, 2, 3, 4


@njit(cache=True, inline="always")
def _wrap(d):
    # d - round(d) with a single subtraction, matching numpy bit for bit
    n = math.floor(d)
    if d - n > 0.5:
        n += 1.0
    return d - n


@njit(cache=True)
def pdist(kind, ax, ay, bx, by):
    if kind == INTERVAL:
        d = ax - bx
        return math.sqrt(d * d)
    if kind == CIRCLE:
        d = abs(ax - bx) % 1.0
        return min(d, 1.0 - d)
    if kind == SQUARE:
        dx = ax - bx
        dy = ay - by
        return math.sqrt(dx * dx + dy * dy)
    dx = _wrap(ax - bx)
    dy = _wrap(ay - by)
    d = math.sqrt(dx * dx + dy * dy)
    if kind == PILLOWCASE:
        ex = _wrap(ax + bx)
        ey = _wrap(ay + by)
        d = min(d, math.sqrt(ex * ex + ey * ey))
    return d


# ---------------------------------------------------------------------------
# uniform grid bucketing
# ---------------------------------------------------------------------------


@njit(cache=True)
def grid_build(gx, gy, nx, ny, x0, x1, y0, y1):
    """Bucket points (gx, gy) into an nx-by-ny grid over [x0, x1) x [y0, y1).

    Returns (order, starts): points of cell c are order[starts[c]:starts[c+1]].
    """
    n = gx.shape[0]
    cell = np.empty(n, dtype=np.int64)
    counts = np.zeros(nx * ny + 1, dtype=np.int64)
    for j in range(n):
        ix = int((gx[j] - x0) / (x1 - x0) * nx)
        iy = int((gy[j] - y0) / (y1 - y0) * ny)
        ix = min(max(ix, 0), nx - 1)
        iy = min(max(iy, 0), ny - 1)
        c = ix * ny + iy
        cell[j] = c
        counts[c + 1] += 1
    starts = np.cumsum(counts)
    fill = starts[:-1].copy()
    order = np.empty(n, dtype=np.int64)
    for j in range(n):
        c = cell[j]
        order[fill[c]] = j
        fill[c] += 1
    return order, starts


@njit(cache=True)
def _cell_of(x, y, nx, ny, x0, x1, y0, y1):
    ix = int((x - x0) / (x1 - x0) * nx)
    iy = int((y - y0) / (y1 - y0) * ny)
    ix = min(max(ix, 0), nx - 1)
    iy = min(max(iy, 0), ny - 1)
    return ix, iy


@njit(cache=True)
def grid_nearest(kind, qx, qy, pts, owner, gx, gy, order, starts, nx, ny,
                 x0, x1, y0, y1, periodic, cutoff, stamp, tag):
    """Nearest indexed point to q by expanding rings of cells.

    ``owner[j]`` maps bucketed point j to the row of ``pts`` it stands for
    (the pillowcase index stores each point twice).  The search stops as soon
    as a distance <= cutoff is seen.  Returns (distance, row).
    """
    cw = (x1 - x0) / nx
    ch = (y1 - y0) / ny
    cmin = cw if ny == 1 else min(cw, ch)
    if periodic:
        qx = qx - math.floor(qx)
        qy = qy - math.floor(qy) if ny > 1 else qy
    cx, cy = _cell_of(qx, qy, nx, ny, x0, x1, y0, y1)
    best = np.inf
    bi = -1
    rmax = max(nx, ny)
    for r in range(rmax + 1):
        if r >= 1 and best <= (r - 1) * cmin:
            break
        ylo = -r if ny > 1 else 0
        yhi = r if ny > 1 else 0
        for dx in range(-r, r + 1):
            for dy in range(ylo, yhi + 1):
                if abs(dx) != r and abs(dy) != r:
                    continue
                ix = cx + dx
                iy = cy + dy
                if periodic:
                    ix %= nx
                    iy %= ny
                elif ix < 0 or ix >= nx or iy < 0 or iy >= ny:
                    continue
                c = ix * ny + iy
                if stamp[c] == tag:
                    continue
                stamp[c] = tag
                for jj in range(starts[c], starts[c + 1]):
                    o = owner[order[jj]]
                    d = pdist(kind, qx, qy, pts[o, 0], pts[o, 1])
                    if d < best:
                        best = d
                        bi = o
                        if best <= cutoff:
                            return best, bi
    return best, bi


@njit(cache=True)
def grid_ball(kind, qx, qy, radius, pts, owner, gx, gy, order, starts, nx, ny,
              x0, x1, y0, y1, periodic, stamp, tag, seen, out_idx, out_d):
    """Rows of ``pts`` within ``radius`` of q, written to out_idx/out_d. Returns count."""
    cw = (x1 - x0) / nx
    ch = (y1 - y0) / ny
    cmin = cw if ny == 1 else min(cw, ch)
    if periodic:
        qx = qx - math.floor(qx)
        qy = qy - math.floor(qy) if ny > 1 else qy
    cx, cy = _cell_of(qx, qy, nx, ny, x0, x1, y0, y1)
    cnt = 0
    rmax = max(nx, ny)
    for r in range(rmax + 1):
        if r >= 1 and (r - 1) * cmin > radius:
            break
        ylo = -r if ny > 1 else 0
        yhi = r if ny > 1 else 0
        for dx in range(-r, r + 1):
            for dy in range(ylo, yhi + 1):
                if abs(dx) != r and abs(dy) != r:
                    continue
                ix = cx + dx
                iy = cy + dy
                if periodic:
                    ix %= nx
                    iy %= ny
                elif ix < 0 or ix >= nx or iy < 0 or iy >= ny:
                    continue
                c = ix * ny + iy
                if stamp[c] == tag:
                    continue
                stamp[c] = tag
                for jj in range(starts[c], starts[c + 1]):
                    o = owner[order[jj]]
                    if seen[o] == tag:
                        continue
                    seen[o] = tag
                    d = pdist(kind, qx, qy, pts[o, 0], pts[o, 1])
                    if d <= radius:
                        out_idx[cnt] = o
                        out_d[cnt] = d
                        cnt += 1
    return cnt


@njit(cache=True)
def directed_grid(kind, A, perm, pts, owner, gx, gy, order, starts, nx, ny,
                  x0, x1, y0, y1, periodic):
    """max over rows of A of the distance to the indexed set (early-break search)."""
    stamp = np.full(nx * ny, -1, dtype=np.int64)
    cmax = -1.0
    for t in range(perm.shape[0]):
        i = perm[t]
        d, _ = grid_nearest(kind, A[i, 0], A[i, 1], pts, owner, gx, gy, order, starts,
                            nx, ny, x0, x1, y0, y1, periodic, cmax, stamp, t)
        if d > cmax:
            cmax = d
    return cmax


@njit(cache=True)
def nearest_all(kind, A, pts, owner, gx, gy, order, starts, nx, ny,
                x0, x1, y0, y1, periodic):
    n = A.shape[0]
    dist = np.empty(n)
    idx = np.empty(n, dtype=np.int64)
    stamp = np.full(nx * ny, -1, dtype=np.int64)
    for i in range(n):
        d, j = grid_nearest(kind, A[i, 0], A[i, 1], pts, owner, gx, gy, order, starts,
                            nx, ny, x0, x1, y0, y1, periodic, -1.0, stamp, i)
        dist[i] = d
        idx[i] = j
    return dist, idx


@njit(cache=True)
def ball_pairs(kind, C, radius, pts, owner, gx, gy, order, starts, nx, ny,
               x0, x1, y0, y1, periodic):
    """All (row of C, row of pts, distance) with distance <= radius, grouped by C row."""
    m = C.shape[0]
    npts = pts.shape[0]
    stamp = np.full(nx * ny, -1, dtype=np.int64)
    seen = np.full(npts, -1, dtype=np.int64)
    buf_i = np.empty(npts, dtype=np.int64)
    buf_d = np.empty(npts)
    cap = max(16, 4 * m)
    ci = np.empty(cap, dtype=np.int64)
    bk = np.empty(cap, dtype=np.int64)
    dd = np.empty(cap)
    n = 0
    for i in range(m):
        cnt = grid_ball(kind, C[i, 0], C[i, 1], radius, pts, owner, gx, gy, order, starts,
                        nx, ny, x0, x1, y0, y1, periodic, stamp, i, seen, buf_i, buf_d)
        if n + cnt > cap:
            while n + cnt > cap:
                cap *= 2
            ci2 = np.empty(cap, dtype=np.int64)
            bk2 = np.empty(cap, dtype=np.int64)
            dd2 = np.empty(cap)
            ci2[:n] = ci[:n]
            bk2[:n] = bk[:n]
            dd2[:n] = dd[:n]
            ci, bk, dd = ci2, bk2, dd2
        for t in range(cnt):
            ci[n] = i
            bk[n] = buf_i[t]
            dd[n] = buf_d[t]
            n += 1
    return ci[:n], bk[:n], dd[:n]


# ---------------------------------------------------------------------------
# Hausdorff distance between small sample sets
# ---------------------------------------------------------------------------


@njit(cache=True)
def _directed_pair(kind, P, p0, p1, Q, q0, q1, cutoff):
    cmax = 0.0
    for i in range(p0, p1):
        best = np.inf
        for j in range(q0, q1):
            d = pdist(kind, P[i, 0], P[i, 1], Q[j, 0], Q[j, 1])
            if d < best:
                best = d
                if best <= cmax:
                    break
        if best > cmax:
            cmax = best
            if cmax >= cutoff:
                return cmax
    return cmax


@njit(cache=True)
def hausdorff_pair(kind, P, Q, cutoff):
    """Exact Hausdorff distance between sample sets, or some value >= cutoff."""
    a = _directed_pair(kind, P, 0, P.shape[0], Q, 0, Q.shape[0], cutoff)
    if a >= cutoff:
        return a
    b = _directed_pair(kind, Q, 0, Q.shape[0], P, 0, P.shape[0], cutoff)
    return max(a, b)


@njit(cache=True)
def hausdorff_csr(kind, P, pofs, pe, Q, qofs, qe, cutoff):
    """Hausdorff distance between element pe of packed set P and element qe of Q."""
    a = _directed_pair(kind, P, pofs[pe], pofs[pe + 1], Q, qofs[qe], qofs[qe + 1], cutoff)
    if a >= cutoff:
        return a
    b = _directed_pair(kind, Q, qofs[qe], qofs[qe + 1], P, pofs[pe], pofs[pe + 1], cutoff)
    return max(a, b)


@njit(cache=True)
def hausdorff_many(kind, P, pofs, pe, Q, qofs, qe, cutoff):
    out = np.empty(pe.shape[0])
    for t in range(pe.shape[0]):
        out[t] = hausdorff_csr(kind, P, pofs, pe[t], Q, qofs, qe[t], cutoff[t])
    return out


@njit(cache=True)
def window_hausdorff(kind, C, B, lo, w, M, cutoff):
    """Hausdorff distance between C and the B samples lo, lo+1, ..., lo+w (indices mod M)."""
    cmax = 0.0
    for i in range(C.shape[0]):
        best = np.inf
        for t in range(w + 1):
            k = (lo + t) % M
            d = pdist(kind, C[i, 0], C[i, 1], B[k, 0], B[k, 1])
            if d < best:
                best = d
                if best <= cmax:
                    break
        if best > cmax:
            cmax = best
            if cmax >= cutoff:
                return cmax
    for t in range(w + 1):
        k = (lo + t) % M
        best = np.inf
        for i in range(C.shape[0]):
            d = pdist(kind, C[i, 0], C[i, 1], B[k, 0], B[k, 1])
            if d < best:
                best = d
                if best <= cmax:
                    break
        if best > cmax:
            cmax = best
            if cmax >= cutoff:
                return cmax
    return cmax


@njit(cache=True)
def landmark_features(kind, L, P, ofs):
    """Per element: distance from each landmark to the element, and the farthest distance."""
    ne = ofs.shape[0] - 1
    nl = L.shape[0]
    out = np.empty((ne, 2 * nl))
    for e in range(ne):
        for l in range(nl):
            lo = np.inf
            hi = 0.0
            for j in range(ofs[e], ofs[e + 1]):
                d = pdist(kind, L[l, 0], L[l, 1], P[j, 0], P[j, 1])
                if d < lo:
                    lo = d
                if d > hi:
                    hi = d
            out[e, l] = lo
            out[e, nl + l] = hi
    return out


# ---------------------------------------------------------------------------
# subarc search: is there a window D of B with d_H(C, D) <= v ?
# ---------------------------------------------------------------------------


@njit(cache=True)
def _feasible(v, m, ci, bk, dd, cand, gmin, M, cyclic, lab, stamp, count):
    """Window test for one threshold.

    ``ci, bk, dd`` list the (C row, B index, distance) pairs sorted by C row;
    ``cand`` is the sorted array of B indices occurring in the pairs and
    ``gmin`` their distance to C.  A window of B lies within v of C (both ways)
    iff it sits inside a maximal run of B indices with gmin <= v and every
    row of C has a pair <= v landing in that run.
    """
    nc = cand.shape[0]
    nact = 0
    run = -1
    prev = -2
    for j in range(nc):
        if gmin[j] <= v:
            nact += 1
            if cand[j] != prev + 1 or run < 0:
                run += 1
            lab[j] = run
            prev = cand[j]
        else:
            lab[j] = -1
            prev = -2
    if run < 0:
        return False
    nruns = run + 1
    if cyclic and nc > 0 and lab[0] >= 0 and lab[nc - 1] >= 0 and cand[0] == 0 and cand[nc - 1] == M - 1:
        last = lab[nc - 1]
        if last != lab[0]:
            for j in range(nc - 1, -1, -1):
                if lab[j] != last:
                    break
                lab[j] = lab[0]
    for r in range(nruns):
        stamp[r] = -1
        count[r] = 0
    npairs = ci.shape[0]
    cur = -1
    got = 0
    for t in range(npairs):
        i = ci[t]
        if i != cur:
            if cur >= 0 and got == 0:
                return False
            # rows with no pair at all are caught below
            cur = i
            got = 0
        if dd[t] > v:
            continue
        j = np.searchsorted(cand, bk[t])
        r = lab[j]
        if r < 0:
            continue
        got += 1
        if stamp[r] != i:
            stamp[r] = i
            count[r] += 1
            if count[r] == m:
                return True
    return False


@njit(cache=True)
def subarc_search(m, ci, bk, dd, M, cyclic, values, lo_val, stop):
    """Smallest v in sorted ``values`` (>= lo_val) for which a window exists.

    Returns (v, exact).  When ``stop`` >= 0 and a window within ``stop``
    exists the search ends early and returns (stop, False).  Returns
    (inf, True) when no listed value works.
    """
    # rows of C without any pair cannot be served by any window
    rows = np.zeros(m, dtype=np.bool_)
    for t in range(ci.shape[0]):
        rows[ci[t]] = True
    for i in range(m):
        if not rows[i]:
            return np.inf, True
    cand = np.unique(bk)
    nc = cand.shape[0]
    gmin = np.full(nc, np.inf)
    for t in range(bk.shape[0]):
        j = np.searchsorted(cand, bk[t])
        if dd[t] < gmin[j]:
            gmin[j] = dd[t]
    lab = np.empty(nc, dtype=np.int64)
    stamp = np.empty(nc + 1, dtype=np.int64)
    count = np.empty(nc + 1, dtype=np.int64)
    if stop >= 0.0:
        if _feasible(stop, m, ci, bk, dd, cand, gmin, M, cyclic, lab, stamp, count):
            return stop, False
    a = np.searchsorted(values, lo_val)
    b = values.shape[0] - 1
    if a > b or not _feasible(values[b], m, ci, bk, dd, cand, gmin, M, cyclic, lab, stamp, count):
        return np.inf, True
    while a < b:
        mid = (a + b) // 2
        if _feasible(values[mid], m, ci, bk, dd, cand, gmin, M, cyclic, lab, stamp, count):
            b = mid
        else:
            a = mid + 1
    return values[a], True


@njit(cache=True)
def best_over_candidates(kind, P, pofs, e, Q, qofs, cand, lbs, best, floor):
    """min over candidate elements g of d_H(P_e, Q_g), visiting g by increasing lower bound.

    Stops once the remaining lower bounds reach the current best, or once the
    best drops to ``floor`` (the caller only needs to know it is that small).
    """
    for t in range(cand.shape[0]):
        if lbs[t] >= best or best <= floor:
            break
        d = hausdorff_csr(kind, P, pofs, e, Q, qofs, cand[t], best)
        if d < best:
            best = d
    return best


@njit(cache=True)
def _prefix_pairs(rowvals, rowidx, lo, w, MA, radius):
    """Pairs (window row, B index, distance) with distance <= radius, from row-sorted distances."""
    cnt = np.empty(w + 1, dtype=np.int64)
    total = 0
    for t in range(w + 1):
        c = np.searchsorted(rowvals[(lo + t) % MA], radius, side="right")
        cnt[t] = c
        total += c
    ci = np.empty(total, dtype=np.int64)
    bk = np.empty(total, dtype=np.int64)
    dd = np.empty(total)
    n = 0
    for t in range(w + 1):
        i = (lo + t) % MA
        for j in range(cnt[t]):
            ci[n] = t
            bk[n] = rowidx[i, j]
            dd[n] = rowvals[i, j]
            n += 1
    return ci, bk, dd


@njit(cache=True)
def _window_exact(rowvals, rowidx, lo, w, MA, MB, cycB, r0):
    """Exact min over windows D of B of d_H(C, D) for C = rows lo..lo+w."""
    r = r0
    top = 0.0
    for t in range(w + 1):
        top = max(top, rowvals[(lo + t) % MA, MB - 1])
    while True:
        if r >= top:
            r = top
        ci, bk, dd = _prefix_pairs(rowvals, rowidx, lo, w, MA, r)
        values = np.unique(dd)
        v, _ = subarc_search(w + 1, ci, bk, dd, MB, cycB, values, 0.0, -1.0)
        if v < np.inf or r >= top:
            return v
        r = 2.0 * r if r > 0 else top / 64.0


@njit(cache=True)
def _mark(done, lo, w, rho, MA, cyclic):
    if rho <= 0:
        done[lo, w] = True
        return
    rho = min(rho, MA)
    end = lo + w
    for ds in range(-rho, rho + 1):
        for dt in range(-rho, rho + 1):
            l2 = lo + ds
            e2 = end + dt
            w2 = e2 - l2
            if w2 < 0:
                continue
            if cyclic:
                if w2 >= MA - 1:
                    done[0, MA - 1] = True
                    continue
                done[l2 % MA, w2] = True
            else:
                if l2 < 0 or e2 > MA - 1:
                    continue
                done[l2, w2] = True


@njit(cache=True)
def second_order_direction(Dm, cycA, cycB, stepA):
    """max over grid windows C of A of min over grid windows D of B of d_H(C, D).

    ``Dm[i, k]`` is the distance between sample i of A and sample k of B.
    Coarse lattices of windows are solved exactly first; a window with value
    v lets every window within index radius (cmax - v) / stepA be skipped,
    since moving each endpoint of C by j samples moves C by at most j * stepA.
    The final dense pass only asks whether each window stays within cmax.
    """
    MA, MB = Dm.shape
    rowidx = np.empty((MA, MB), dtype=np.int64)
    rowvals = np.empty((MA, MB))
    for i in range(MA):
        o = np.argsort(Dm[i], kind="mergesort")
        rowidx[i] = o
        rowvals[i] = Dm[i][o]
    done = np.zeros((MA, MA), dtype=np.bool_)
    cmax = -1.0
    stride = 1
    while stride * 8 <= MA:
        stride *= 2
    while stride >= 1:
        for w in range(MA - 1, -1, -1):
            if w % stride and w != MA - 1:
                continue
            nlo = MA if cycA else MA - w
            for lo in range(0, nlo, stride):
                if cycA and w == MA - 1 and lo > 0:
                    continue
                if done[lo, w]:
                    continue
                lb = 0.0
                for t in range(w + 1):
                    lb = max(lb, rowvals[(lo + t) % MA, 0])
                if stride == 1 and lb <= cmax:
                    ci, bk, dd = _prefix_pairs(rowvals, rowidx, lo, w, MA, cmax)
                    _, exact = subarc_search(w + 1, ci, bk, dd, MB, cycB, np.empty(0), 0.0, cmax)
                    if not exact:
                        done[lo, w] = True
                        continue
                v = _window_exact(rowvals, rowidx, lo, w, MA, MB, cycB, max(lb, cmax))
                if v > cmax:
                    cmax = v
                rho = int(math.floor((cmax - v) / stepA * (1.0 - 1e-9))) if stepA > 0 else 0
                _mark(done, lo, w, rho, MA, cycA)
        stride //= 2
    return cmax


# ---------------------------------------------------------------------------
# straight leaf segments: cell hits and point-to-polyline distance
# ---------------------------------------------------------------------------


@njit(cache=True)
def segment_hits_cell(cx, cy, dx, dy, half, x0, x1, y0, y1):
    """Does {c + t d : |t| <= half} reduced mod Z^2 meet [x0, x1] x [y0, y1]?

    Columns x in [x0 + j, x1 + j] are scanned outward from the one nearest c,
    so long segments are settled close to their centre.
    """
    if abs(dx) < 1e-300:
        return False
    if dx < 0:
        dx, dy = -dx, -dy
    tlo_all = -half
    thi_all = half
    jc = math.floor(cx - x0)
    jmin = math.ceil(cx - half * dx - x1)
    jmax = math.floor(cx + half * dx - x0)
    step = 0
    while True:
        done_up = jc + step > jmax
        done_dn = jc - step < jmin
        if done_up and done_dn:
            return False
        for sgn in (1, -1):
            if step == 0 and sgn == -1:
                continue
            j = jc + sgn * step
            if j < jmin or j > jmax:
                continue
            ta = max((x0 + j - cx) / dx, tlo_all)
            tb = min((x1 + j - cx) / dx, thi_all)
            if ta > tb:
                continue
            ya = cy + ta * dy
            yb = cy + tb * dy
            lo = min(ya, yb)
            hi = max(ya, yb)
            k = math.ceil(lo - y1)
            if k <= hi - y0:
                return True
        step += 1


@njit(cache=True)
def mixing_hits(cells, centres_n, dx, dy, half_n, pillow):
    """hits[u, v, n]: the arc of V's orbit at time n meets cell u (and -u on the pillowcase)."""
    nc = cells * cells
    nn = half_n.shape[0]
    hits = np.zeros((nc, nc, nn), dtype=np.bool_)
    w = 1.0 / cells
    for v in range(nc):
        for n in range(nn):
            cx = centres_n[v, n, 0]
            cy = centres_n[v, n, 1]
            for u in range(nc):
                ux = (u // cells) * w
                uy = (u % cells) * w
                h = segment_hits_cell(cx, cy, dx, dy, half_n[n], ux, ux + w, uy, uy + w)
                if not h and pillow:
                    h = segment_hits_cell(cx, cy, dx, dy, half_n[n], 1.0 - ux - w, 1.0 - ux, 1.0 - uy - w, 1.0 - uy)
                hits[u, v, n] = h
    return hits


@njit(cache=True)
def _seg_dist(vx, vy, hx, hy):
    # distance from v to the segment [-h, h]
    hh = hx * hx + hy * hy
    t = 0.0
    if hh > 0:
        t = (vx * hx + vy * hy) / hh
        t = min(1.0, max(-1.0, t))
    ex = vx - t * hx
    ey = vy - t * hy
    return math.sqrt(ex * ex + ey * ey)


@njit(cache=True)
def polyline_distance(qx, qy, mids, halfs, order, starts, n, hmax, stamp, tag):
    """Torus distance from q to a union of short segments indexed on an n x n grid.

    Segment j is mids[j] + s * halfs[j], |s| <= 1, with |halfs[j]| <= hmax.
    Exact while the answer is below 0.5 - hmax.
    """
    cw = 1.0 / n
    qx = qx - math.floor(qx)
    qy = qy - math.floor(qy)
    cx = min(int(qx * n), n - 1)
    cy = min(int(qy * n), n - 1)
    best = np.inf
    for r in range(n + 1):
        if r >= 1 and best <= (r - 1) * cw - hmax:
            break
        for ddx in range(-r, r + 1):
            for ddy in range(-r, r + 1):
                if abs(ddx) != r and abs(ddy) != r:
                    continue
                ix = (cx + ddx) % n
                iy = (cy + ddy) % n
                c = ix * n + iy
                if stamp[c] == tag:
                    continue
                stamp[c] = tag
                for jj in range(starts[c], starts[c + 1]):
                    j = order[jj]
                    d = _seg_dist(_wrap(qx - mids[j, 0]), _wrap(qy - mids[j, 1]), halfs[j, 0], halfs[j, 1])
                    if d < best:
                        best = d
    return best


@njit(cache=True)
def polyline_distance_many(Q, pillow, mids, halfs, order, starts, n, hmax):
    out = np.empty(Q.shape[0])
    stamp = np.full(n * n, -1, dtype=np.int64)
    tag = 0
    for i in range(Q.shape[0]):
        d = polyline_distance(Q[i, 0], Q[i, 1], mids, halfs, order, starts, n, hmax, stamp, tag)
        tag += 1
        if pillow:
            d = min(d, polyline_distance(-Q[i, 0], -Q[i, 1], mids, halfs, order, starts, n, hmax, stamp, tag))
            tag += 1
        out[i] = d
    return out


@njit(cache=True)
def _thin(kind, C, k):
    """Every k-th row of C plus the last, and the largest distance from a row to its nearer kept neighbour."""
    m = C.shape[0]
    keep = (m - 1) // k + 1
    last = (keep - 1) * k != m - 1
    S = np.empty((keep + (1 if last else 0), 2))
    for j in range(keep):
        S[j] = C[j * k]
    if last:
        S[keep] = C[m - 1]
    sl = 0.0
    for i in range(m):
        j0 = (i // k) * k
        j1 = min(j0 + k, m - 1)
        d = min(pdist(kind, C[i, 0], C[i, 1], C[j0, 0], C[j0, 1]), pdist(kind, C[i, 0], C[i, 1], C[j1, 0], C[j1, 1]))
        sl = max(sl, d)
    return S, sl


@njit(cache=True)
def family_sup(kind, P, pofs, order, ub, cmax, M, cyclic, pts, owner, gx, gy, gorder, starts, nx, ny,
               x0, x1, y0, y1, periodic):
    """max over elements of min over windows of the indexed arc, visiting ``order`` while ub > cmax.

    Each element is solved by ``subarc_search`` on the pairs within its upper
    bound (doubled until a window exists), stopping early once it cannot beat
    the running maximum.  Returns (max, number solved).
    """
    solved = 0
    for t in range(order.shape[0]):
        e = order[t]
        if ub[e] <= cmax:
            break
        C = P[pofs[e]:pofs[e + 1]]
        solved += 1
        if cmax > 0 and C.shape[0] > 8:
            # a thinned copy within sl of every sample settles most elements cheaply
            S, sl = _thin(kind, C, 4)
            if cmax - sl > 0:
                ci, bk, dd = ball_pairs(kind, S, cmax - sl, pts, owner, gx, gy, gorder, starts, nx, ny,
                                        x0, x1, y0, y1, periodic)
                probe = np.array([cmax - sl])
                v, exact = subarc_search(S.shape[0], ci, bk, dd, M, cyclic, probe, 0.0, cmax - sl)
                if v <= cmax - sl:
                    continue
        if cmax > 0:
            # then the pairs within the running maximum
            ci, bk, dd = ball_pairs(kind, C, cmax, pts, owner, gx, gy, gorder, starts, nx, ny,
                                    x0, x1, y0, y1, periodic)
            probe = np.array([cmax])
            v, exact = subarc_search(C.shape[0], ci, bk, dd, M, cyclic, probe, 0.0, cmax)
            if v <= cmax:
                continue
        r = ub[e]
        while True:
            ci, bk, dd = ball_pairs(kind, C, r, pts, owner, gx, gy, gorder, starts, nx, ny,
                                    x0, x1, y0, y1, periodic)
            values = np.unique(dd)
            v, exact = subarc_search(C.shape[0], ci, bk, dd, M, cyclic, values, 0.0, cmax)
            if v < np.inf:
                break
            r *= 2.0
        if exact and v > cmax:
            cmax = v
    return cmax, solved
