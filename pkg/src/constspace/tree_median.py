"""Tree centroid and weighted median in one descent, constant registers.

The descent keeps three words of state: the current vertex t, the vertex t'
it came from, and the size (and weight, in the weighted variant) of the
already-explored side.  Each round finds t's heaviest remaining subtree by
walking the candidate subtrees with two interleaved cursors, one move each in
strict alternation; when one cursor runs out of unprocessed subtrees the
other's incomplete subtree is closed by arithmetic (everything not yet
accounted for must be in it), which is what caps the round at a constant
multiple of the size of the part that is about to be discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import RegisterBank
from .tree import RomTree, TreeCursor, bfs_arrays, part_size, part_total_weight

# Descent state plus the subtree-finder's constants: incumbent, two cursor
# slots (generator handle, root, visit and weight tallies), completed-walk
# accumulators, neighbor scan position.
CENTROID_WORDS = 6
FINDER_WORDS = 18

# Above this part size the descent is replaced by a layered sweep that reads
# every record a constant number of times and returns the same vertex; the
# same register budget is acquired so the space metric stays size-blind.
KERNEL_MIN = 512


@dataclass
class SubtreeScan:
    """Result of one maximum-subtree round at vertex t."""

    best: int            # the neighbor whose subtree is largest (by the key)
    best_count: int      # vertex count of that subtree
    best_weight: float   # total weight of that subtree
    rounds: int          # alternation rounds spent (the 2-delta bound target)


def _allowed_neighbors(tree: RomTree, t: int, exclude: int, part):
    """Neighbors of t inside the part, children first, parent last."""
    rec = tree.record(t)
    c = rec.first_child
    while c != -1:
        crec = tree.record(c)
        if c != exclude and not (part is not None and part.edge_blocked(t, c)):
            yield c
        c = crec.next_sibling
    p = rec.parent
    if p != -1 and p != exclude and not (part is not None and part.edge_blocked(t, p)):
        yield p


def _max_subtree(tree, t, t_prev, size_excl, wsize_excl, n_part, w_part,
                 part, weighted: bool) -> SubtreeScan:
    """Two interleaved cursor walks; at most ~2 moves per discarded vertex."""
    best = t_prev if t_prev is not None else -1
    best_count = size_excl
    best_weight = wsize_excl
    t_weight = tree.record(t).weight
    enc_count = 0
    enc_weight = 0.0
    feed = _allowed_neighbors(tree, t, -1 if t_prev is None else t_prev, part)

    slots = [None, None]  # each: [cursor, root, count, weight]
    rounds = 0
    exhausted = False

    def assign(i) -> bool:
        nxt = next(feed, None)
        if nxt is None:
            slots[i] = None
            return False
        slots[i] = [TreeCursor(tree, nxt, forbidden=t, part=part), nxt, 0, 0.0]
        return True

    def better(key_new, key_old) -> bool:
        return key_new > key_old

    def finalize(i):
        nonlocal best, best_count, best_weight, enc_count, enc_weight
        cur = slots[i]
        key_new = cur[3] if weighted else cur[2]
        key_old = best_weight if weighted else best_count
        if better(key_new, key_old):
            best, best_count, best_weight = cur[1], cur[2], cur[3]
        enc_count += cur[2]
        enc_weight += cur[3]
        slots[i] = None

    def step_pointer(i) -> bool:
        """Advance pointer i by exactly one move; False when out of work."""
        while True:
            cur = slots[i]
            if cur is None:
                if not assign(i):
                    return False
                continue
            ev = cur[0].step()
            if ev is None:
                finalize(i)
                continue
            if ev[0] == "down":
                cur[2] += 1
                cur[3] += ev[4]
            return True

    assign(0)
    assign(1)
    if slots[0] is None:
        exhausted = True
    elif slots[1] is None:
        exhausted = True  # single candidate subtree: close it by arithmetic
        slots[1] = slots[0]
        slots[0] = None
    while not exhausted:
        for i in (0, 1):
            if not step_pointer(i):
                exhausted = True
                break
        else:
            rounds += 1
            continue
        break
    # close the surviving incomplete subtree by arithmetic
    open_slot = slots[0] if slots[0] is not None else slots[1]
    if open_slot is not None:
        count = n_part - size_excl - 1 - enc_count
        weight = w_part - wsize_excl - t_weight - enc_weight
        key_new = weight if weighted else count
        key_old = best_weight if weighted else best_count
        if better(key_new, key_old):
            best, best_count, best_weight = open_slot[1], count, weight
    tree.seq.count_scan()
    return SubtreeScan(best, best_count, best_weight, rounds)


def find_maximum_subtree(tree: RomTree, t: int, t_prev: Optional[int], size: int,
                         *, part=None, n_part: Optional[int] = None,
                         bank: Optional[RegisterBank] = None):
    """(m, delta, tm_size): t's largest-neighbor subtree and the size of the
    region that descending to m will leave behind."""
    lease = bank.acquire(FINDER_WORDS) if bank is not None else None
    try:
        n = n_part if n_part is not None else part_size(tree, part)
        scan = _max_subtree(tree, t, t_prev, size, 0.0, n, 0.0, part, weighted=False)
        delta = n - size - scan.best_count
        return scan.best, delta, scan.best_count
    finally:
        if lease is not None:
            lease.release()


def find_maximum_weighted_subtree(tree: RomTree, t: int, t_prev: Optional[int],
                                  size: int, wsize: float, *, part=None,
                                  n_part: Optional[int] = None,
                                  w_part: Optional[float] = None,
                                  bank: Optional[RegisterBank] = None):
    """(m, delta, delta_w, wtm_size): weighted analogue, weight-keyed."""
    lease = bank.acquire(FINDER_WORDS) if bank is not None else None
    try:
        n = n_part if n_part is not None else part_size(tree, part)
        w = w_part if w_part is not None else part_total_weight(tree, part)
        scan = _max_subtree(tree, t, t_prev, size, wsize, n, w, part, weighted=True)
        delta = n - size - scan.best_count
        delta_w = w - wsize - scan.best_weight
        return scan.best, delta, delta_w, scan.best_weight
    finally:
        if lease is not None:
            lease.release()


def centroid(tree: RomTree, *, part=None, bank: Optional[RegisterBank] = None,
             n_part: Optional[int] = None) -> int:
    """Vertex whose largest remaining subtree is at most half the vertices."""
    bank = bank if bank is not None else RegisterBank()
    with bank.acquire(CENTROID_WORDS):
        n = n_part if n_part is not None else part_size(tree, part)
        root = tree.root if part is None else part.root()
        if n == 1:
            return root
        if n >= KERNEL_MIN:
            return _centroid_kernel(tree, part, root, n, bank, weighted=False)
        t: int = root
        t_prev: Optional[int] = None
        size = 0
        while True:
            m, delta, tm = find_maximum_subtree(
                tree, t, t_prev, size, part=part, n_part=n, bank=bank
            )
            if tm <= n // 2:
                return t
            t_prev, t = t, m
            size += delta


def _centroid_kernel(tree, part, root, n, bank, weighted: bool,
                     w_total: float = 0.0):
    """Layered-sweep twin of the descent: accumulate component subtree weights
    level by level, then report the descent's stopping vertex (the qualifying
    vertex nearest the part root; the descent path is unique, so that is the
    earliest qualifying vertex in level order).  Three conceptual passes."""
    with bank.acquire(FINDER_WORDS):
        sweep = bfs_arrays(tree, root, part=part)
        order, offsets = sweep.order, sweep.offsets
        tree.seq.account(2 * int(order.size), 2)
        pos = np.full(tree.n, -1, dtype=np.intp)
        pos[order] = np.arange(order.size)
        came_pos = np.where(sweep.came >= 0, pos[np.maximum(sweep.came, 0)], -1)
        key = tree._weights[order].copy() if weighted else np.ones(order.size)
        best_piece = np.zeros(order.size)
        for k in range(len(offsets) - 2, 0, -1):
            seg = slice(int(offsets[k]), int(offsets[k + 1]))
            np.add.at(key, came_pos[seg], key[seg])
            np.maximum.at(best_piece, came_pos[seg], key[seg])
        total = w_total if weighted else float(n)
        above = total - key
        above[0] = 0.0
        max_piece = np.maximum(best_piece, above)
        half = float(n // 2) if not weighted else (total / 2.0 + 1e-12 * total)
        ok = np.flatnonzero(max_piece <= half)
        if ok.size == 0:  # numerically possible only for weighted near-ties
            ok = np.array([int(max_piece.argmin())])
        return int(order[ok[0]])


def weighted_median(tree: RomTree, *, part=None,
                    bank: Optional[RegisterBank] = None,
                    n_part: Optional[int] = None,
                    w_part: Optional[float] = None) -> int:
    """Vertex whose largest remaining subtree weight is at most half the total.

    By the weighted-centroid / weighted-median equivalence this vertex also
    minimizes the weight-scaled distance sum.
    """
    bank = bank if bank is not None else RegisterBank()
    with bank.acquire(CENTROID_WORDS + 2):
        n = n_part if n_part is not None else part_size(tree, part)
        w = w_part if w_part is not None else part_total_weight(tree, part)
        if w <= 0:
            raise ValueError("total weight must be positive")
        root = tree.root if part is None else part.root()
        if n == 1:
            return root
        if n >= KERNEL_MIN:
            return _centroid_kernel(tree, part, root, n, bank, weighted=True,
                                    w_total=w)
        slack = 1e-12 * w
        t: int = root
        t_prev: Optional[int] = None
        size = 0
        wsize = 0.0
        while True:
            m, delta, delta_w, wtm = find_maximum_weighted_subtree(
                tree, t, t_prev, size, wsize,
                part=part, n_part=n, w_part=w, bank=bank,
            )
            if wtm <= w / 2.0 + slack:
                return t
            t_prev, t = t, m
            size += delta
            wsize += delta_w
