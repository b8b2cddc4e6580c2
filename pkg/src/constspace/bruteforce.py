"""Unrestricted-memory reference solvers.

These are the ground truth the constant-workspace algorithms are verified
against.  They deliberately use as much memory as they like and favor the
most transparent formulation over speed; none of them shares code with the
algorithms under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import MeteredSequence


@dataclass(frozen=True)
class OracleReport:
    value: float
    witness: object
    method: str


def _coords(points) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(points, MeteredSequence):
        pts = [points._elements[i] for i in range(len(points))]
    else:
        pts = list(points)
    xs = np.array([p[0] for p in pts], dtype=np.float64)
    ys = np.array([p[1] for p in pts], dtype=np.float64)
    return xs, ys


def oracle_constrained_center(points, x_l: float, tol: float = 1e-12) -> OracleReport:
    """Golden-section search on the convex max-distance profile along the line."""
    xs, ys = _coords(points)
    if xs.size == 0:
        raise ValueError("need at least one point")

    def g(y: float) -> float:
        return float(np.sqrt(((xs - x_l) ** 2 + (ys - y) ** 2).max()))

    diam = math.hypot(xs.max() - xs.min(), ys.max() - ys.min()) + 1.0
    lo = float(ys.min()) - diam
    hi = float(ys.max()) + diam
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol * max(1.0, abs(a), abs(b)):
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - inv_phi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + inv_phi * (b - a)
            gd = g(d)
    y_star = 0.5 * (a + b)
    return OracleReport(g(y_star), (x_l, y_star), "golden-section")


def oracle_mec(points) -> OracleReport:
    """Exhaustive minimum enclosing circle: the optimal center is a pair
    midpoint or a triple circumcenter, so take the candidate center with the
    smallest covering radius.  O(n^3) candidates; guarded to n <= 200."""
    xs, ys = _coords(points)
    n = xs.size
    if n == 0:
        raise ValueError("need at least one point")
    if n > 200:
        raise ValueError("exhaustive enclosing-circle oracle limited to n <= 200")
    if n == 1:
        return OracleReport(0.0, (float(xs[0]), float(ys[0]), 0.0), "exhaustive")

    cand_x = []
    cand_y = []
    ii, jj = np.triu_indices(n, k=1)
    cand_x.append((xs[ii] + xs[jj]) / 2.0)
    cand_y.append((ys[ii] + ys[jj]) / 2.0)
    if n >= 3:
        a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        mask = (a < b) & (b < c)
        ai, bi, ci = a[mask], b[mask], c[mask]
        ax, ay = xs[ai], ys[ai]
        bx, by = xs[bi], ys[bi]
        cx, cy = xs[ci], ys[ci]
        d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
        ok = np.abs(d) > 1e-12
        sa = ax * ax + ay * ay
        sb = bx * bx + by * by
        sc = cx * cx + cy * cy
        with np.errstate(divide="ignore", invalid="ignore"):
            ux = (sa * (by - cy) + sb * (cy - ay) + sc * (ay - by)) / d
            uy = (sa * (cx - bx) + sb * (ax - cx) + sc * (bx - ax)) / d
        cand_x.append(ux[ok])
        cand_y.append(uy[ok])
    CX = np.concatenate(cand_x)
    CY = np.concatenate(cand_y)
    # covering radius of every candidate center; the minimum is the MEC
    d2 = (CX[:, None] - xs[None, :]) ** 2 + (CY[:, None] - ys[None, :]) ** 2
    radii = np.sqrt(d2.max(axis=1))
    best = int(radii.argmin())
    return OracleReport(
        float(radii[best]), (float(CX[best]), float(CY[best]), float(radii[best])),
        "exhaustive",
    )


# -- tree references -----------------------------------------------------------


def _tree_arrays(tree):
    import numpy as np

    return tree._parents, tree._weights, tree._lengths


def _adjacency(tree) -> list[list[tuple[int, float]]]:
    parents, _w, lengths = _tree_arrays(tree)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(tree.n)]
    for v in range(tree.n):
        p = int(parents[v])
        if p != -1:
            adj[v].append((p, float(lengths[v])))
            adj[p].append((v, float(lengths[v])))
    return adj


def _distances_from(tree, src: int, adj=None, allowed=None) -> np.ndarray:
    adj = adj if adj is not None else _adjacency(tree)
    dist = np.full(tree.n, np.inf)
    dist[src] = 0.0
    stack = [src]
    while stack:
        u = stack.pop()
        for v, ln in adj[u]:
            if allowed is not None and not (allowed[u] and allowed[v]):
                continue
            if dist[v] == np.inf:
                dist[v] = dist[u] + ln
                stack.append(v)
    return dist


def _subtree_sizes(tree):
    """size[v] = vertices in v's rooted subtree, by reverse topological order."""
    parents, _w, _l = _tree_arrays(tree)
    order = _topo_order(tree)
    size = np.ones(tree.n, dtype=np.int64)
    wsize = tree._weights.copy()
    for v in reversed(order):
        p = int(parents[v])
        if p != -1:
            size[p] += size[v]
            wsize[p] += wsize[v]
    return size, wsize


def _topo_order(tree) -> list[int]:
    parents, _w, _l = _tree_arrays(tree)
    children: list[list[int]] = [[] for _ in range(tree.n)]
    for v in range(tree.n):
        if parents[v] != -1:
            children[int(parents[v])].append(v)
    order, stack = [], [tree.root]
    while stack:
        u = stack.pop()
        order.append(u)
        stack.extend(children[u])
    return order


def _max_subtree_table(tree):
    """MaxS(v) and MaxWS(v) for every vertex, full-memory."""
    parents, weights, _l = _tree_arrays(tree)
    size, wsize = _subtree_sizes(tree)
    total_w = float(weights.sum())
    n = tree.n
    max_s = np.zeros(n, dtype=np.int64)
    max_ws = np.zeros(n)
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if parents[v] != -1:
            children[int(parents[v])].append(v)
    for v in range(n):
        best, best_w = 0, 0.0
        for c in children[v]:
            best = max(best, int(size[c]))
            best_w = max(best_w, float(wsize[c]))
        if parents[v] != -1:
            best = max(best, n - int(size[v]))
            best_w = max(best_w, total_w - float(wsize[v]))
        max_s[v] = best
        max_ws[v] = best_w
    return max_s, max_ws


def oracle_centroid(tree) -> OracleReport:
    max_s, _ = _max_subtree_table(tree)
    best = int(max_s.min())
    winners = [int(v) for v in np.flatnonzero(max_s == best)]
    return OracleReport(float(best), winners, "exhaustive-maxs")


def oracle_weighted_median(tree) -> OracleReport:
    """Weighted-centroid argmin; asserts it coincides with the distance-sum
    argmin (the classic equivalence) on every instance it is asked about."""
    _, max_ws = _max_subtree_table(tree)
    best = float(max_ws.min())
    tol = 1e-9 * max(1.0, best)
    winners = [int(v) for v in np.flatnonzero(max_ws <= best + tol)]
    adj = _adjacency(tree)
    sumwd = np.zeros(tree.n)
    for v in range(tree.n):
        d = _distances_from(tree, v, adj)
        sumwd[v] = float((d * tree._weights).sum())
    s_best = float(sumwd.min())
    s_tol = 1e-9 * max(1.0, s_best)
    s_winners = [int(v) for v in np.flatnonzero(sumwd <= s_best + s_tol)]
    if set(winners) != set(s_winners):
        raise AssertionError(
            f"weighted centroid set {winners} != weighted median set {s_winners}"
        )
    return OracleReport(best, winners, "exhaustive-maxws")


def _edge_list(tree) -> list[tuple[int, int, float]]:
    parents, _w, lengths = _tree_arrays(tree)
    return [
        (int(parents[v]), v, float(lengths[v]))
        for v in range(tree.n)
        if parents[v] != -1
    ]


def _center_on_edge_exhaustive(weights, du, dv, length):
    """Minimize the upper envelope of the weighted distance lines on one edge.

    du/dv hold distances to the edge endpoints, infinite off-side; candidate
    offsets are the endpoints and every pairwise line crossing inside.
    """
    u_side = du < dv
    slopes = np.where(u_side, weights, -weights)
    icepts = np.where(u_side, weights * du, weights * (dv + length))
    cands = [0.0, length]
    s_i = slopes[:, None]
    s_j = slopes[None, :]
    b_i = icepts[:, None]
    b_j = icepts[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (b_j - b_i) / (s_i - s_j)
    mask = np.triu(np.isfinite(x), k=1) & (x > 0.0) & (x < length)
    cands.extend(x[mask].tolist())
    xs = np.array(cands)
    vals = (slopes[None, :] * xs[:, None] + icepts[None, :]).max(axis=1)
    k = int(vals.argmin())
    return float(xs[k]), float(vals[k])


def oracle_tree_1center(tree, allowed=None) -> OracleReport:
    """Per-edge envelope minimization over every edge (of the allowed
    component); exact because the envelope minimum sits on a line crossing
    or an endpoint."""
    if tree.n > 300:
        raise ValueError("exhaustive tree 1-center oracle limited to n <= 300")
    adj = _adjacency(tree)
    mask = allowed if allowed is not None else np.ones(tree.n, dtype=bool)
    verts = np.flatnonzero(mask)
    if verts.size == 1:
        v = int(verts[0])
        return OracleReport(0.0, (v, v, 0.0), "edge-envelope")
    best = (math.inf, None)
    for u, v, ln in _edge_list(tree):
        if not (mask[u] and mask[v]):
            continue
        du = _distances_from(tree, u, adj, allowed=mask)[verts]
        dv = _distances_from(tree, v, adj, allowed=mask)[verts]
        x, val = _center_on_edge_exhaustive(tree._weights[verts], du, dv, ln)
        if val < best[0]:
            best = (val, (u, v, x))
    return OracleReport(best[0], best[1], "edge-envelope")


def oracle_split(tree) -> OracleReport:
    """Try every edge as the split; value is the smaller max of the two side
    radii, each side solved by the edge-envelope oracle."""
    if tree.n > 200:
        raise ValueError("exhaustive split oracle limited to n <= 200")
    parents, _w, _l = _tree_arrays(tree)
    size, _ = _subtree_sizes(tree)
    best = (math.inf, None)
    for u, v, _ln in _edge_list(tree):
        below = _component_mask(tree, v)
        r1 = oracle_tree_1center(tree, allowed=below).value
        r2 = oracle_tree_1center(tree, allowed=~below).value
        val = max(r1, r2)
        if val < best[0]:
            best = (val, (u, v))
    return OracleReport(best[0], best[1], "exhaustive-split")


def _component_mask(tree, top: int) -> np.ndarray:
    """Vertices in the rooted subtree of `top`."""
    parents, _w, _l = _tree_arrays(tree)
    mask = np.zeros(tree.n, dtype=bool)
    order = _topo_order(tree)
    for v in order:
        if v == top or (parents[v] != -1 and mask[int(parents[v])]):
            mask[v] = True
    return mask
