"""Weighted 1-center and 2-center of a tree.

The 1-center search runs in two stages.  A centroid descent shrinks the
window-encoded search tree by at least half per round: at the current
centroid c, the subtree holding the vertex of maximum weighted distance from
c must hold the center, and when the window update would create a third
internal leaf the junction of the offending anchors repairs it back to two.
Once the window is a single edge, the center is the balance point of two
families of linear functions along that edge (weight times distance through
either endpoint), found by the same prune-and-search engine as the line
case, driven by the pairwise crossing points of the lines.

The 2-center splits the tree at the edge minimizing the larger of the two
side radii and runs the 1-center on each side.  The split search is the same
window descent, except the direction at a vertex is decided by evaluating
that min-max objective on every incident edge (two nested 1-center radii
each) and following the best one, which is valid because the objective is
unimodal along every path of the tree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import approx, engine, selection
from .engine import Dominance, Found, Interval, ValidPair
from .model import RegisterBank
from .tree import (
    HalfPart,
    RomTree,
    TreeCursor,
    TreeWindow,
    bfs_arrays,
    compose_parts,
    junction,
    part_size,
    part_total_weight,
    side_of,
)
from .tree_median import centroid

# Loop state of the window descent: window pairs, centroid, direction, sizes.
DESCEND_WORDS = 9
# 1-center wrapper: edge ids and the part handle.
W1C_WORDS = 4
# Envelope stage: anchors, edge length, family split, result slots.
ENVELOPE_WORDS = 8
# 2-center wrapper: split edge ids, the two result slots.
TWOCENTER_WORDS = 4
# searches nested under the split descent finish their survivors earlier so
# the whole call chain stays inside one 64-word bank
_SPLIT_CUTOFF = 7

_KERNEL_MIN = 512


@dataclass(frozen=True)
class EdgeLocation:
    """Point on the edge (u, v), `offset` measured from u; u == v encodes a
    single-vertex tree."""

    u: int
    v: int
    offset: float


@dataclass(frozen=True)
class CenterResult:
    location: EdgeLocation
    radius: float


def max_weighted_vertex(tree: RomTree, c: int, *, part=None,
                        bank: Optional[RegisterBank] = None):
    """Argmax of w(v) * d(v, c) over the part, with the neighbor of c whose
    side holds it.  One pass; ties keep the first vertex in scan order."""
    n = part_size(tree, part)
    if n >= _KERNEL_MIN:
        sweep = bfs_arrays(tree, c, part=part)
        vals = tree._weights[sweep.order] * sweep.dist
        k = int(vals.argmax())
        if vals[k] <= 0.0 and sweep.order.size == 1:
            return c, -1, 0.0
        return int(sweep.order[k]), int(sweep.branch[k]), float(vals[k])
    cur = TreeCursor(tree, c, part=part)
    best_v, best_t, best = c, -1, -1.0
    while True:
        ev = cur.step()
        if ev is None:
            break
        if ev[0] != "down":
            continue
        _kind, v, dist, branch, weight = ev
        val = weight * dist
        if val > best:
            best_v, best_t, best = v, branch, val
    tree.seq.count_scan()
    return best_v, best_t, max(best, 0.0)


# -- window descent --------------------------------------------------------------


def _window_edge(tree: RomTree, comp) -> tuple[int, int]:
    """The single edge of a two-vertex part."""
    root = tree.root if comp is None else comp.root()
    rec = tree.record(root)
    c = rec.first_child
    while c != -1:
        if comp is None or not comp.edge_blocked(root, c):
            if comp is None or comp.contains(c):
                return root, c
        c = tree.record(c).next_sibling
    p = rec.parent
    if p != -1 and (comp is None or (not comp.edge_blocked(root, p) and comp.contains(p))):
        return root, p
    raise AssertionError("two-vertex part without a usable edge")


def _in_plus(tree: RomTree, c: int, t: int, x: int) -> bool:
    """Is x in the closed subtree through neighbor t of c (c itself included)?"""
    return x == c or side_of(tree, c, x) == t


def _in_side(tree: RomTree, j: int, t: int, x: int) -> bool:
    """Is x in the open subtree through neighbor t of j (j excluded)?"""
    return x != j and side_of(tree, j, x) == t


DirectionFn = Callable[[int, object], int]
WindowHook = Callable[[TreeWindow, int], None]


def _descend_window(tree: RomTree, part, bank: RegisterBank,
                    direction: DirectionFn,
                    hook: Optional[WindowHook] = None) -> tuple[int, int]:
    """Shrink the window to a single edge; `direction` names, for a vertex of
    the current search tree, the neighbor whose side must keep the target."""
    with bank.acquire(DESCEND_WORDS):
        window = TreeWindow.whole(tree)
        while True:
            comp = compose_parts(part, window)
            n = part_size(tree, comp)
            if n < 2:
                raise AssertionError("search tree shrank below an edge")
            if n == 2:
                return _window_edge(tree, comp)
            c = centroid(tree, part=comp, bank=bank, n_part=n)
            t = direction(c, comp)
            p1, p2 = window.pair1, window.pair2
            both_in = (
                p1 is not None
                and p2 is not None
                and _in_plus(tree, c, t, p1[0])
                and _in_plus(tree, c, t, p2[0])
            )
            if both_in:
                j = junction(tree, c, p1[0], p2[0])
                comp_t = compose_parts(part, TreeWindow(tree, (c, t), None), window)
                t2 = direction(j, comp_t)
                if _in_side(tree, j, t2, p1[0]):
                    window = TreeWindow(tree, p1, (j, t2))
                elif _in_side(tree, j, t2, p2[0]):
                    window = TreeWindow(tree, (j, t2), p2)
                elif _in_side(tree, j, t2, c):
                    window = TreeWindow(tree, (j, t2), (c, t))
                else:
                    window = TreeWindow(tree, (j, t2), None)
            elif p1 is not None and _in_plus(tree, c, t, p1[0]):
                window = TreeWindow(tree, p1, (c, t))
            elif p2 is not None and _in_plus(tree, c, t, p2[0]):
                window = TreeWindow(tree, (c, t), p2)
            else:
                window = TreeWindow(tree, (c, t), None)
            if hook is not None:
                hook(window, c)


def find_center_edge(tree: RomTree, *, part=None,
                     bank: Optional[RegisterBank] = None,
                     hook: Optional[WindowHook] = None) -> tuple[int, int]:
    """Edge containing a weighted 1-center of the part."""
    bank = bank if bank is not None else RegisterBank()

    def direction(v: int, comp) -> int:
        _vmax, t, _val = max_weighted_vertex(tree, v, part=part, bank=bank)
        if t == -1:
            raise AssertionError("direction query at an isolated vertex")
        if comp is not None and comp.edge_blocked(v, t):
            raise AssertionError("weighted-distance direction left the window")
        return t

    return _descend_window(tree, part, bank, direction, hook)


# -- prune-and-search on the center edge -------------------------------------------


class _EnvelopePlugin:
    """Lines w*(d(anchor, v) + travel) over the edge, both families merged.

    Elements 0..n1-1 rise with x (distance measured through u); the rest fall
    (through v).  The virtual pairing tree runs over the concatenation; a
    pair's critical value is the crossing point of its two lines.
    """

    def __init__(self, tree, slopes, icepts, n1, region0, eps, bank):
        self.tree = tree
        self.slopes = slopes
        self.icepts = icepts
        self.n1 = n1
        self.region0 = region0
        self.eps = eps
        self.bank = bank
        self.n = int(slopes.size)
        self.supports_bulk = True

    def begin_pass(self):
        pass

    def end_pass(self):
        self.tree.seq.count_scan()

    def read(self, i: int):
        self.tree.seq.account(1, 0)
        return float(self.slopes[i]), float(self.icepts[i])

    def charge_pass(self):
        self.tree.seq.account(self.n, 1)

    def initial_region(self) -> Interval:
        return self.region0

    def dominance(self, i, j, region):
        return self.dominance_records(self.read(i), i, self.read(j), j, region)

    def dominance_records(self, ra, ta, rb, tb, region: Interval):
        s1, b1 = ra
        s2, b2 = rb
        low = Dominance.P if ta < tb else Dominance.Q
        scale = approx.scale(s1, s2)
        if abs(s1 - s2) <= self.eps * scale:
            if abs(b1 - b2) <= self.eps * approx.scale(b1, b2):
                return low
            return Dominance.P if b1 > b2 else Dominance.Q
        x = (b2 - b1) / (s1 - s2)
        if region.contains(x, self.eps):
            return ValidPair(x)
        sample = region.sample()
        fa = s1 * sample + b1
        fb = s2 * sample + b2
        if fa == fb:
            return low
        return Dominance.P if fa > fb else Dominance.Q

    def bulk_corner_keys(self, region: Interval):
        self.charge_pass()
        return [
            (self.slopes * region.lo + self.icepts, None),
            (self.slopes * region.hi + self.icepts, None),
        ]

    def bulk_pair_criticals(self, a_idx, b_idx, region: Interval):
        s1, b1 = self.slopes[a_idx], self.icepts[a_idx]
        s2, b2 = self.slopes[b_idx], self.icepts[b_idx]
        scale = np.maximum(1.0, np.maximum(np.abs(s1), np.abs(s2)))
        parallel = np.abs(s1 - s2) <= self.eps * scale
        denom = np.where(parallel, 1.0, s1 - s2)
        x = (b2 - b1) / denom
        ok = np.isfinite(x) & ~parallel
        ref = np.maximum(1.0, np.abs(x))
        ok &= (x - region.lo) > self.eps * np.maximum(ref, abs(region.lo))
        ok &= (region.hi - x) > self.eps * np.maximum(ref, abs(region.hi))
        return ok, x

    def query(self, m: float, region: Interval):
        self.charge_pass()
        vals = self.slopes * m + self.icepts
        k1 = float(vals[: self.n1].max()) if self.n1 else -math.inf
        k2 = float(vals[self.n1 :].max()) if self.n1 < self.n else -math.inf
        if abs(k1 - k2) <= 1e-12 * max(1.0, abs(k1), abs(k2)):
            return Found((m, max(k1, k2)))
        if k1 > k2:
            return Interval(region.lo, m)
        return Interval(m, region.hi)

    def brute_force(self, tags, region: Interval):
        """Minimize the survivor-line envelope over the closed region; runs
        under the engine's survivor lease."""
        lines = [self.read(t) for t in tags]
        self.tree.seq.account(0, 1)
        cands = [region.lo, region.hi]
        for i in range(len(lines)):
            for j in range(i + 1, len(lines)):
                s1, b1 = lines[i]
                s2, b2 = lines[j]
                if abs(s1 - s2) <= self.eps * approx.scale(s1, s2):
                    continue
                x = (b2 - b1) / (s1 - s2)
                if region.lo <= x <= region.hi:
                    cands.append(x)
        best_x, best_val = None, math.inf
        for x in cands:
            val = max(s * x + b for s, b in lines)
            if val < best_val - 1e-18 or (val == best_val and (best_x is None or x < best_x)):
                best_x, best_val = x, val
        return best_x, best_val


def _side_lines(tree: RomTree, anchor: int, blocked: int, part, base: float,
                sign: float):
    """Enumerate one family: weights, anchored distances -> slopes, intercepts."""
    n = part_size(tree, part) if part is not None else tree.n
    if n >= _KERNEL_MIN:
        sweep = bfs_arrays(tree, anchor, forbidden=blocked, part=part)
        w = tree._weights[sweep.order]
        return sign * w, w * (sweep.dist + base), sweep.order
    cur = TreeCursor(tree, anchor, forbidden=blocked, part=part)
    slopes, icepts, order = [], [], []
    while True:
        ev = cur.step()
        if ev is None:
            break
        if ev[0] != "down":
            continue
        _kind, v, dist, _branch, weight = ev
        slopes.append(sign * weight)
        icepts.append(weight * (dist + base))
        order.append(v)
    tree.seq.count_scan()
    return np.array(slopes), np.array(icepts), np.array(order, dtype=np.intp)


def center_on_edge(tree: RomTree, u: int, v: int, *, part=None,
                   bank: Optional[RegisterBank] = None,
                   cutoff: int = engine.DEFAULT_CUTOFF,
                   strategy: selection.Strategy | None = None,
                   observer: engine.Observer | None = None,
                   eps: float = approx.DEFAULT_EPS) -> CenterResult:
    """Exact weighted 1-center on the edge (u, v), which must contain one.

    The two line families are pruned together by the pairing engine; the
    returned radius is recomputed against every vertex of the part in a final
    verification pass.
    """
    bank = bank if bank is not None else RegisterBank()
    with bank.acquire(ENVELOPE_WORDS):
        length = tree.edge_len(u, v)
        s1, b1, _o1 = _side_lines(tree, u, v, part, 0.0, +1.0)
        s2, b2, _o2 = _side_lines(tree, v, u, part, length, -1.0)
        # x is the distance from u; the far family falls as x grows
        slopes = np.concatenate([s1, s2])
        icepts = np.concatenate([b1, b2])
        plugin = _EnvelopePlugin(
            tree, slopes, icepts, int(s1.size), Interval(0.0, length), eps, bank
        )
        x, _val = engine.run(
            plugin, bank=bank, cutoff=cutoff, strategy=strategy, observer=observer
        )
        x = min(max(x, 0.0), length)
        # verification pass: the lines are exactly w(v) * d(point, v)
        plugin.charge_pass()
        vals = plugin.slopes * x + plugin.icepts
        radius = float(vals.max()) if vals.size else 0.0
        return CenterResult(EdgeLocation(u, v, x), radius)


def weighted_1center(tree: RomTree, *, part=None,
                     bank: Optional[RegisterBank] = None,
                     cutoff: int = engine.DEFAULT_CUTOFF,
                     strategy: selection.Strategy | None = None,
                     observer: engine.Observer | None = None,
                     hook: Optional[WindowHook] = None,
                     eps: float = approx.DEFAULT_EPS) -> CenterResult:
    """Point of the part minimizing the maximum weighted distance."""
    bank = bank if bank is not None else RegisterBank()
    with bank.acquire(W1C_WORDS):
        n = part_size(tree, part)
        if n == 1:
            v = tree.root if part is None else part.root()
            return CenterResult(EdgeLocation(v, v, 0.0), 0.0)
        u, v = find_center_edge(tree, part=part, bank=bank, hook=hook)
        return center_on_edge(
            tree, u, v, part=part, bank=bank, cutoff=cutoff,
            strategy=strategy, observer=observer, eps=eps,
        )


def weighted_radius(tree: RomTree, part=None, *,
                    bank: Optional[RegisterBank] = None,
                    **kw) -> float:
    """Weighted radius of the part: the 1-center's objective value."""
    return weighted_1center(tree, part=part, bank=bank, **kw).radius


# -- 2-center ------------------------------------------------------------------------


def find_split_edge(tree: RomTree, *, bank: Optional[RegisterBank] = None,
                    strategy: selection.Strategy | None = None,
                    hook: Optional[WindowHook] = None) -> tuple[int, int]:
    """Edge whose removal minimizes the larger of the two side radii.

    Direction at a vertex: evaluate that objective on every incident edge of
    the current search tree (two nested 1-center radii each) and descend
    toward the smallest; the objective is unimodal along paths, so the argmin
    side holds an optimal split edge.
    """
    if tree.n < 2:
        raise ValueError("need at least two vertices to split")
    bank = bank if bank is not None else RegisterBank()

    def direction(v: int, comp) -> int:
        # A strictly better edge deeper in direction t forces, via the
        # unimodality of the objective along tree paths, both that (v, t) is
        # among the incident minimizers and that its own subtree side carries
        # the binding radius.  So take the incident minimum and prefer a
        # subtree-binding direction; when none exists (or several do) no
        # deeper edge beats the incident optimum, and the chosen edge itself
        # stays inside the new window.
        best_t, best_val, best_bind = -1, math.inf, False
        for t in _part_neighbors(tree, v, comp):
            sub = weighted_radius(tree, HalfPart(tree, t, v), bank=bank,
                                  strategy=strategy, cutoff=_SPLIT_CUTOFF)
            rest = weighted_radius(tree, HalfPart(tree, v, t), bank=bank,
                                   strategy=strategy, cutoff=_SPLIT_CUTOFF)
            val = max(sub, rest)
            binding = sub >= rest * (1.0 - 1e-12)
            if best_t == -1:
                best_t, best_val, best_bind = t, val, binding
                continue
            tol = 1e-12 * max(1.0, best_val)
            if val < best_val - tol or (abs(val - best_val) <= tol
                                        and binding and not best_bind):
                best_t, best_val, best_bind = t, val, binding
        if best_t == -1:
            raise AssertionError("split direction query found no usable edge")
        return best_t

    return _descend_window(tree, None, bank, direction, hook)


def _part_neighbors(tree: RomTree, v: int, comp):
    rec = tree.record(v)
    c = rec.first_child
    while c != -1:
        if comp is None or (not comp.edge_blocked(v, c) and comp.contains(c)):
            yield c
        c = tree.record(c).next_sibling
    p = rec.parent
    if p != -1 and (comp is None or (not comp.edge_blocked(v, p) and comp.contains(p))):
        yield p


def weighted_2center(tree: RomTree, *, bank: Optional[RegisterBank] = None,
                     cutoff: int = engine.DEFAULT_CUTOFF,
                     strategy: selection.Strategy | None = None,
                     hook: Optional[WindowHook] = None,
                     eps: float = approx.DEFAULT_EPS
                     ) -> tuple[CenterResult, CenterResult]:
    """Two centers: the split edge's sides solved independently.

    The objective (max of the two radii) is what the oracle checks.
    """
    if tree.n < 2:
        raise ValueError("need at least two vertices")
    bank = bank if bank is not None else RegisterBank()
    inner_cutoff = min(cutoff, _SPLIT_CUTOFF)
    with bank.acquire(TWOCENTER_WORDS):
        u, v = find_split_edge(tree, bank=bank, strategy=strategy, hook=hook)
        first = weighted_1center(
            tree, part=HalfPart(tree, u, v), bank=bank, cutoff=inner_cutoff,
            strategy=strategy, eps=eps,
        )
        second = weighted_1center(
            tree, part=HalfPart(tree, v, u), bank=bank, cutoff=inner_cutoff,
            strategy=strategy, eps=eps,
        )
        return first, second
