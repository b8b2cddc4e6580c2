"""Read-only rooted trees: DCEL queries, constant-space walks, windows.

A tree lives in a :class:`MeteredSequence` of per-vertex records
(parent, first child, next sibling, weight, parent-edge length), so the three
DCEL queries cost one probe each and every traversal's touch count is
measured.  The walk primitives never hold a stack: a component walk is the
descending Euler tour of the start's subtree followed by a climb along its
ancestors, walking each ancestor's remaining subtrees on the way up, which
keeps every move classifiable as first-arrival or return from two registers.

Restrictions compose through small `part` objects: a half part cuts one edge
and keeps one side; a window keeps the intersection of up to two half-trees
encoded as (u, v) vertex pairs, the constant-size encoding of the shrinking
search tree used by the center searches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

import numpy as np

from .model import AccessMode, MeteredSequence


class VertexRecord(NamedTuple):
    parent: int          # -1 at the root
    first_child: int     # -1 if leaf
    next_sibling: int    # -1 if last child
    weight: float
    edge_len: float      # length of the edge to the parent; 0.0 at the root


class RomTree:
    """Immutable rooted tree over a metered record sequence.

    Construction (link derivation, validation, bulk arrays) happens at load
    time and is outside any algorithm's space budget; algorithms only ever
    touch the record sequence through the metered reads.
    """

    def __init__(self, parents, weights=None, lengths=None, child_order=None):
        parents = [int(p) for p in parents]
        n = len(parents)
        if n == 0:
            raise ValueError("empty tree")
        weights = [1.0] * n if weights is None else [float(w) for w in weights]
        lengths = [1.0] * n if lengths is None else [float(x) for x in lengths]
        if not (len(weights) == n and len(lengths) == n):
            raise ValueError("parents, weights and lengths must have equal length")
        roots = [i for i, p in enumerate(parents) if p == -1]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        declaration = list(child_order) if child_order is not None else list(range(n))
        first = [-1] * n
        sibling = [-1] * n
        last_child = [-1] * n
        for v in declaration:
            p = parents[v]
            if p == -1:
                continue
            if not 0 <= p < n:
                raise ValueError(f"vertex {v}: parent {p} out of range")
            if last_child[p] == -1:
                first[p] = v
            else:
                sibling[last_child[p]] = v
            last_child[p] = v
        for v in range(n):
            if v == self.root:
                continue
            if weights[v] < 0:
                raise ValueError(f"vertex {v}: negative weight")
            if lengths[v] <= 0:
                raise ValueError(f"vertex {v}: edge length must be positive")
            seen, u = 0, v
            while u != -1 and seen <= n:
                u = parents[u]
                seen += 1
            if seen > n:
                raise ValueError("parent links contain a cycle")
        lengths = list(lengths)
        lengths[self.root] = 0.0
        records = [
            VertexRecord(parents[v], first[v], sibling[v], weights[v], lengths[v])
            for v in range(n)
        ]
        self.seq = MeteredSequence(records, AccessMode.RANDOM)
        self.n = n
        # bulk mirrors for the vectorized pass kernels, children in link order
        self._parents = np.array(parents, dtype=np.intp)
        self._weights = np.array(weights, dtype=np.float64)
        self._lengths = np.array(lengths, dtype=np.float64)
        kid_lists: list[list[int]] = [[] for _ in range(n)]
        for v in declaration:
            if parents[v] != -1:
                kid_lists[parents[v]].append(v)
        counts = np.array([len(k) for k in kid_lists], dtype=np.intp)
        self._kids = np.array(
            [c for ks in kid_lists for c in ks], dtype=np.intp
        ) if n > 1 else np.empty(0, dtype=np.intp)
        self._kid_off = np.concatenate([[0], np.cumsum(counts)]).astype(np.intp)

    # -- the three DCEL queries -------------------------------------------------

    def record(self, u: int) -> VertexRecord:
        return self.seq.read(u)

    def parent(self, u: int) -> Optional[int]:
        p = self.record(u).parent
        return None if p == -1 else p

    def first_child(self, u: int) -> Optional[int]:
        c = self.record(u).first_child
        return None if c == -1 else c

    def next_child(self, u: int, v: int) -> Optional[int]:
        rec = self.record(v)
        if rec.parent != u:
            raise ValueError(f"{v} is not a child of {u}")
        s = rec.next_sibling
        return None if s == -1 else s

    def weight(self, u: int) -> float:
        return self.record(u).weight

    def edge_len(self, u: int, v: int) -> float:
        """Length of the edge between adjacent u and v."""
        rec = self.record(v)
        if rec.parent == u:
            return rec.edge_len
        rec_u = self.record(u)
        if rec_u.parent != v:
            raise ValueError(f"{u} and {v} are not adjacent")
        return rec_u.edge_len

    def neighbors(self, u: int) -> list[int]:
        """Adjacent vertices, children first (load-order), then the parent."""
        rec = self.record(u)
        out = []
        c = rec.first_child
        while c != -1:
            crec = self.record(c)
            out.append(c)
            c = crec.next_sibling
        if rec.parent != -1:
            out.append(rec.parent)
        return out

    def total_weight(self) -> float:
        """One full pass."""
        total = 0.0
        for _i, rec in self.seq.iterate():
            total += rec.weight
        return total


# -- parts: restrictions to a connected component ------------------------------


class WholeTree:
    def __init__(self, tree: RomTree):
        self.tree = tree

    def root(self) -> int:
        return self.tree.root

    def contains(self, x: int) -> bool:
        return 0 <= x < self.tree.n

    def edge_blocked(self, a: int, b: int) -> bool:
        return False


@dataclass(frozen=True)
class HalfPart:
    """One side of a single cut edge: the component of ``keep`` after removing
    the edge (keep, cut)."""

    tree: RomTree
    keep: int
    cut: int

    def __post_init__(self):
        rec = self.tree.record(self.keep)
        if rec.parent != self.cut and self.tree.record(self.cut).parent != self.keep:
            raise ValueError(f"({self.keep}, {self.cut}) is not an edge")

    def root(self) -> int:
        # rooted at keep if the cut edge goes up from keep, else at the tree root
        if self.tree.record(self.keep).parent == self.cut:
            return self.keep
        return self.tree.root

    def contains(self, x: int) -> bool:
        if self.tree.record(self.keep).parent == self.cut:
            # keep side = descendants of keep
            return _is_or_descends(self.tree, x, self.keep)
        return not _is_or_descends(self.tree, x, self.cut)

    def edge_blocked(self, a: int, b: int) -> bool:
        return (a == self.keep and b == self.cut) or (a == self.cut and b == self.keep)


def _is_or_descends(tree: RomTree, x: int, top: int) -> bool:
    """Walk x upward: does it reach `top`?  O(depth) probes, two registers."""
    while x != -1:
        if x == top:
            return True
        x = tree.record(x).parent
    return False


@dataclass(frozen=True)
class TreeWindow:
    """The shrinking search tree T', encoded by at most two half-tree pairs.

    Each pair (u, v) of adjacent vertices keeps {u} plus everything on v's
    side of the edge; T' is the intersection of the active pairs (the whole
    tree when none is set).  At most two leaves of T' are internal vertices
    of the original tree, which is what makes this constant-size encoding
    closed under the centroid-descent updates.
    """

    tree: RomTree
    pair1: Optional[tuple[int, int]] = None
    pair2: Optional[tuple[int, int]] = None

    @staticmethod
    def whole(tree: RomTree) -> "TreeWindow":
        return TreeWindow(tree, None, None)

    def pairs(self) -> list[tuple[int, int]]:
        return [p for p in (self.pair1, self.pair2) if p is not None]

    def root(self) -> int:
        best = self.tree.root
        best_depth = -1
        for u, v in self.pairs():
            if self.tree.record(v).parent == u:
                d = _walk_depth(self.tree, u)
                if d > best_depth:
                    best, best_depth = u, d
        return best

    def contains(self, x: int) -> bool:
        for u, v in self.pairs():
            if x == u:
                continue
            if self.tree.record(v).parent == u:
                # keep set: {u} + descendants of v
                if not _is_or_descends(self.tree, x, v):
                    return False
            else:
                # v is the parent of u: keep everything except u's strict subtree
                if _is_or_descends(self.tree, x, u):
                    return False
        return True

    def edge_blocked(self, a: int, b: int) -> bool:
        for u, v in self.pairs():
            if (a == u or b == u) and a != v and b != v:
                return True
        return False

    def with_pair(self, slot: int, u: int, v: int) -> "TreeWindow":
        if slot == 1:
            return TreeWindow(self.tree, (u, v), self.pair2)
        return TreeWindow(self.tree, self.pair1, (u, v))


def window_contains(window: TreeWindow, x: int) -> bool:
    return window.contains(x)


def window_root(window: TreeWindow) -> int:
    return window.root()


# -- constant-space component walk ---------------------------------------------


class TreeCursor:
    """Stackless walk of the component of ``start`` on the allowed side.

    ``forbidden``, if given, names a neighbor of start whose side is skipped;
    ``part`` adds edge blocks.  ``step()`` advances one move and returns
    ("down"|"up", vertex, dist, branch, weight) with dist the path length from
    start and branch the depth-one vertex of the current excursion; None when
    the walk is complete.  Down events enumerate each component vertex exactly
    once.  Probes: one record read per move plus one per blocked-candidate hop.
    """

    def __init__(self, tree: RomTree, start: int, forbidden: Optional[int] = None,
                 part=None):
        if not 0 <= start < tree.n:
            raise ValueError(f"invalid vertex {start}")
        if forbidden is not None:
            rec = tree.record(forbidden)
            if rec.parent != start and tree.record(start).parent != forbidden:
                raise ValueError(f"{forbidden} is not adjacent to {start}")
        self._gen = _component_moves(tree, start, -1 if forbidden is None else forbidden, part)
        self.moves = 0
        self.visited = 0
        self._done = False

    def step(self):
        if self._done:
            return None
        try:
            ev = next(self._gen)
        except StopIteration:
            self._done = True
            return None
        self.moves += 1
        if ev[0] == "down":
            self.visited += 1
        return ev

    def __iter__(self) -> Iterator[int]:
        while True:
            ev = self.step()
            if ev is None:
                return
            if ev[0] == "down":
                yield ev[1]


def dfs_cursor(tree: RomTree, start: int, forbidden: Optional[int] = None,
               part=None) -> TreeCursor:
    return TreeCursor(tree, start, forbidden, part)


def _blocked(part, a: int, b: int) -> bool:
    return part is not None and part.edge_blocked(a, b)


def _component_moves(tree: RomTree, start: int, forbidden: int, part):
    read = tree.record
    start_rec = read(start)
    yield ("down", start, 0.0, -1, start_rec.weight)
    yield from _descend_moves(tree, start, start_rec, forbidden, part, 0.0, None)
    # climb through the ancestors unless that side is forbidden or cut
    child, child_rec = start, start_rec
    dist = 0.0
    branch = start_rec.parent
    while True:
        p = child_rec.parent
        if p == -1 or p == forbidden and child == start:
            return
        if _blocked(part, child, p):
            return
        p_rec = read(p)
        dist += child_rec.edge_len
        yield ("down", p, dist, branch, p_rec.weight)
        yield from _descend_moves(tree, p, p_rec, child, part, dist, branch)
        child, child_rec = p, p_rec


def _descend_moves(tree: RomTree, root: int, root_rec: VertexRecord, skip: int,
                   part, dist0: float, branch0):
    """Euler moves over the descendants of root, skipping the `skip` child."""
    read = tree.record
    cur, cur_rec, dist = root, root_rec, dist0
    came, came_rec = -1, None  # child we last returned from
    branch = branch0
    while True:
        cand = cur_rec.first_child if came == -1 else came_rec.next_sibling
        while cand != -1 and ((cur == root and cand == skip) or _blocked(part, cur, cand)):
            cand = read(cand).next_sibling
        if cand != -1:
            cand_rec = read(cand)
            dist += cand_rec.edge_len
            if cur == root and branch0 is None:
                branch = cand
            yield ("down", cand, dist, branch, cand_rec.weight)
            cur, cur_rec = cand, cand_rec
            came, came_rec = -1, None
        else:
            if cur == root:
                return
            p = cur_rec.parent
            p_rec = read(p)
            dist -= cur_rec.edge_len
            yield ("up", p, dist, branch, p_rec.weight)
            came, came_rec = cur, cur_rec
            cur, cur_rec = p, p_rec


# -- aggregates over components --------------------------------------------------


def subtree_size(tree: RomTree, v: int, toward: int) -> int:
    """Vertex count of the component of `toward` after removing v."""
    cur = TreeCursor(tree, toward, forbidden=v)
    count = 0
    for _ in cur:
        count += 1
    tree.seq.count_scan()
    return count


def subtree_weight(tree: RomTree, v: int, toward: int) -> float:
    cur = TreeCursor(tree, toward, forbidden=v)
    total = 0.0
    while True:
        ev = cur.step()
        if ev is None:
            break
        if ev[0] == "down":
            total += ev[4]
    tree.seq.count_scan()
    return total


_PART_KERNEL_MIN = 512


def part_size(tree: RomTree, part) -> int:
    if isinstance(part, WholeTree) or part is None:
        return tree.n
    if tree.n >= _PART_KERNEL_MIN:
        return int(bfs_arrays(tree, part.root(), part=part).order.size)
    cur = TreeCursor(tree, part.root(), part=part)
    count = sum(1 for _ in cur)
    tree.seq.count_scan()
    return count


def part_total_weight(tree: RomTree, part) -> float:
    if isinstance(part, WholeTree) or part is None:
        return tree.total_weight()
    if tree.n >= _PART_KERNEL_MIN:
        sweep = bfs_arrays(tree, part.root(), part=part)
        return float(tree._weights[sweep.order].sum())
    cur = TreeCursor(tree, part.root(), part=part)
    total = 0.0
    while True:
        ev = cur.step()
        if ev is None:
            break
        if ev[0] == "down":
            total += ev[4]
    tree.seq.count_scan()
    return total


def junction(tree: RomTree, a: int, b: int, c: int) -> int:
    """The single vertex where the three pairwise paths meet.

    Computed as the deepest of the three pairwise meeting points; if one
    argument lies on the path between the others it is its own junction.
    O(depth) time, constant registers (depths and two climbing cursors).
    """
    meets = [_meet(tree, a, b), _meet(tree, a, c), _meet(tree, b, c)]
    depths = [_walk_depth(tree, m) for m in meets]
    return meets[depths.index(max(depths))]


def _walk_depth(tree: RomTree, x: int) -> int:
    d = 0
    while True:
        p = tree.record(x).parent
        if p == -1:
            return d
        x = p
        d += 1


def _meet(tree: RomTree, x: int, y: int) -> int:
    dx, dy = _walk_depth(tree, x), _walk_depth(tree, y)
    while dx > dy:
        x = tree.record(x).parent
        dx -= 1
    while dy > dx:
        y = tree.record(y).parent
        dy -= 1
    while x != y:
        x = tree.record(x).parent
        y = tree.record(y).parent
    return x


def side_of(tree: RomTree, c: int, x: int) -> int:
    """Neighbor of c whose side contains x (x != c): the first step of the
    path from c to x.  O(depth) parent walks, no storage."""
    if x == c:
        raise ValueError("x coincides with c")
    prev = -1
    u = x
    while u != -1:
        if u == c:
            return prev
        prev = u
        u = tree.record(u).parent
    # c is not an ancestor of x: the path leaves c through its parent
    return tree.record(c).parent


# -- vectorized pass kernel -------------------------------------------------------


class BfsSweep(NamedTuple):
    order: np.ndarray    # vertex ids in level order; order[0] is the anchor
    dist: np.ndarray     # path length from the anchor, aligned with order
    branch: np.ndarray   # depth-one vertex each entry hangs from (-1 at anchor)
    offsets: np.ndarray  # layer k occupies order[offsets[k]:offsets[k+1]]
    came: np.ndarray     # vertex each entry was discovered from (-1 at anchor)


def bfs_arrays(tree: RomTree, anchor: int, forbidden: int = -1, part=None) -> BfsSweep:
    """Level-order sweep of the allowed component of anchor.

    One conceptual pass: charges len(order) probes and one scan.
    """
    n = tree.n
    parents, lengths = tree._parents, tree._lengths
    kids, kid_off = tree._kids, tree._kid_off
    visited = np.zeros(n, dtype=bool)
    visited[anchor] = True
    order = [np.array([anchor], dtype=np.intp)]
    dist_all = np.zeros(n, dtype=np.float64)
    branch_all = np.full(n, -1, dtype=np.intp)
    came_all = np.full(n, -1, dtype=np.intp)
    frontier = np.array([anchor], dtype=np.intp)
    depth = 0
    while frontier.size:
        counts = kid_off[frontier + 1] - kid_off[frontier]
        total = int(counts.sum())
        if total:
            starts = kid_off[frontier]
            reps = np.repeat(np.arange(frontier.size), counts)
            offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            cand_kids = kids[starts[reps] + offs]
            src_kids = frontier[reps]
        else:
            cand_kids = np.empty(0, dtype=np.intp)
            src_kids = cand_kids
        pars = parents[frontier]
        keep_par = pars != -1
        cand = np.concatenate([cand_kids, pars[keep_par]])
        src = np.concatenate([src_kids, frontier[keep_par]])
        step = np.concatenate([lengths[cand_kids], lengths[frontier[keep_par]]])
        ok = ~visited[cand]
        if forbidden != -1:
            ok &= ~(((src == anchor) & (cand == forbidden))
                    | ((cand == anchor) & (src == forbidden)))
        if part is not None:
            ok &= ~_edge_blocked_bulk(part, src, cand)
        cand, src, step = cand[ok], src[ok], step[ok]
        if cand.size == 0:
            break
        visited[cand] = True
        dist_all[cand] = dist_all[src] + step
        branch_all[cand] = cand if depth == 0 else branch_all[src]
        came_all[cand] = src
        order.append(cand)
        frontier = cand
        depth += 1
    out = np.concatenate(order)
    offsets = np.concatenate([[0], np.cumsum([layer.size for layer in order])])
    tree.seq.account(int(out.size), 1)
    return BfsSweep(out, dist_all[out], branch_all[out], offsets.astype(np.intp),
                    came_all[out])


def _edge_blocked_bulk(part, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    blocked = np.zeros(a.shape, dtype=bool)
    if isinstance(part, TreeWindow):
        for u, v in part.pairs():
            blocked |= ((a == u) | (b == u)) & (a != v) & (b != v)
    elif isinstance(part, HalfPart):
        blocked |= ((a == part.keep) & (b == part.cut)) | (
            (a == part.cut) & (b == part.keep))
    elif isinstance(part, _ComposedPart):
        for sub in part.parts:
            blocked |= _edge_blocked_bulk(sub, a, b)
    return blocked


@dataclass(frozen=True)
class _ComposedPart:
    """Intersection of restrictions; its top vertex is the deepest part root
    (the roots of nested connected parts sit on one ancestor chain)."""

    parts: tuple

    def root(self) -> int:
        tree = self.parts[0].tree
        roots = [p.root() for p in self.parts]
        depths = [_walk_depth(tree, r) for r in roots]
        return roots[depths.index(max(depths))]

    def contains(self, x: int) -> bool:
        return all(p.contains(x) for p in self.parts)

    def edge_blocked(self, a: int, b: int) -> bool:
        return any(p.edge_blocked(a, b) for p in self.parts)


def compose_parts(*parts) -> object:
    real = tuple(p for p in parts if p is not None and not isinstance(p, WholeTree))
    if not real:
        return None
    if len(real) == 1:
        return real[0]
    return _ComposedPart(real)
