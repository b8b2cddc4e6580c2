"""K-th order statistic over a re-iterable value stream in constant workspace.

The stream is never stored: every pass re-enumerates the same (value, tag)
pairs in the same order, and the selector keeps only a constant number of
words between passes.  Ties are impossible because tags are unique, so the
order used throughout is lexicographic on (value, tag) and every rank has
exactly one answer.

Two strategies:

* ``Deterministic`` walks value levels: each pass finds the smallest value
  above the current threshold together with its multiplicity, then one final
  pass resolves the tag by occurrence order.  Pass count is bounded by the
  number of distinct values plus one.

* ``RandomizedPivot`` samples a small batch of pivots per round (reservoir
  sampling, batch size 4), counts the bucket populations in a second pass and
  recurses into the bucket holding the target rank.  Expected passes are
  O(log n); with a fixed seed the pass sequence is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np

from .model import RegisterBank

# Words for the selector's persistent state: 4 pivots as (value, tag) pairs,
# 5 bucket counters, lo/hi bounds, rank offset, loop bookkeeping.
SELECT_WORDS = 23

_PIVOT_BATCH = 4


class ValueStream:
    """Deterministically re-iterable multiset of (value, tag) pairs.

    ``generate`` re-enumerates the pairs with O(1) state of its own; tags must
    be unique and strictly increasing along the enumeration.  ``bulk``, when
    given, returns the same pairs as a (values, tags) array pair in one
    vectorized pass; both callables are expected to charge the underlying
    input's counters themselves.
    """

    def __init__(
        self,
        generate: Callable[[], Iterator[tuple[float, int]]],
        bulk: Callable[[], tuple[np.ndarray, np.ndarray]] | None = None,
        length: int | None = None,
    ):
        self._generate = generate
        self._bulk = bulk
        self.length = length
        self.passes = 0

    def scan(self) -> Iterator[tuple[float, int]]:
        self.passes += 1
        return self._generate()

    def scan_bulk(self) -> tuple[np.ndarray, np.ndarray] | None:
        if self._bulk is None:
            return None
        self.passes += 1
        return self._bulk()


@dataclass(frozen=True)
class Deterministic:
    """Value-level threshold walk; passes <= distinct values + 1."""


@dataclass(frozen=True)
class RandomizedPivot:
    """Batched random-pivot narrowing; expected O(log n) passes."""

    seed: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


Strategy = Deterministic | RandomizedPivot

_NEG_INF = (-np.inf, -1)


def _lex_gt(v: float, t: int, bound: tuple[float, int]) -> bool:
    return v > bound[0] or (v == bound[0] and t > bound[1])


def _lex_gt_arr(v: np.ndarray, t: np.ndarray, bound) -> np.ndarray:
    return (v > bound[0]) | ((v == bound[0]) & (t > bound[1]))


def select_kth(
    stream: ValueStream,
    k: int,
    *,
    strategy: Strategy | None = None,
    bank: RegisterBank | None = None,
) -> tuple[float, int]:
    """Return the pair with exactly k-1 lexicographically smaller pairs.

    Raises ValueError on an empty stream or an out-of-range rank.
    """
    value, tag, count = _select_with_count(stream, k, strategy=strategy, bank=bank)
    if count == 0:
        raise ValueError("selection from an empty stream")
    if value is None:
        raise ValueError(f"rank {k} out of range [1, {count}]")
    return value, tag


def median(
    stream: ValueStream,
    *,
    strategy: Strategy | None = None,
    bank: RegisterBank | None = None,
) -> tuple[float, int]:
    """Lower median: select_kth with k = ceil(length / 2)."""
    value, tag, count = _select_with_count(stream, None, strategy=strategy, bank=bank)
    if count == 0:
        raise ValueError("median of an empty stream")
    return value, tag


def _select_with_count(
    stream: ValueStream,
    k: int | None,
    *,
    strategy: Strategy | None = None,
    bank: RegisterBank | None = None,
) -> tuple[Optional[float], Optional[int], int]:
    """Core selector; k=None means the lower median of whatever is counted.

    Returns (value, tag, count); (None, None, count) when count == 0 or k is
    out of range.
    """
    strategy = strategy if strategy is not None else RandomizedPivot()
    lease = bank.acquire(SELECT_WORDS) if bank is not None else None
    try:
        if isinstance(strategy, Deterministic):
            return _select_deterministic(stream, k)
        return _select_randomized(stream, k, strategy.rng())
    finally:
        if lease is not None:
            lease.release()


# -- deterministic threshold walk --------------------------------------------


def _select_deterministic(stream, k):
    if k is None:
        count = _count_pass(stream)
        if count == 0:
            return None, None, 0
        k = (count + 1) // 2
        total = count
    else:
        total = None
    if k < 1:
        return None, None, total if total is not None else _count_pass(stream)

    rank_below = 0
    threshold: float | None = None
    while True:
        level, mult = _next_level(stream, threshold)
        if level is None:
            # ran out of values: k exceeded the stream length
            return None, None, rank_below
        if rank_below + mult >= k:
            tag = _tag_at_occurrence(stream, level, k - rank_below)
            return level, tag, total if total is not None else max(rank_below + mult, k)
        rank_below += mult
        threshold = level


def _count_pass(stream) -> int:
    arrs = stream.scan_bulk()
    if arrs is not None:
        n = int(arrs[0].size)
    else:
        n = sum(1 for _ in stream.scan())
    stream.length = n
    return n


def _next_level(stream, threshold):
    """One pass: smallest value strictly above threshold and its multiplicity."""
    arrs = stream.scan_bulk()
    if arrs is not None:
        values = arrs[0]
        if threshold is not None:
            values = values[values > threshold]
        if values.size == 0:
            return None, 0
        level = float(values.min())
        return level, int(np.count_nonzero(values == level))
    level = None
    mult = 0
    for v, _t in stream.scan():
        if threshold is not None and v <= threshold:
            continue
        if level is None or v < level:
            level, mult = v, 1
        elif v == level:
            mult += 1
    return level, mult


def _tag_at_occurrence(stream, level: float, j: int) -> int:
    """Tag of the j-th pair with this value, in enumeration (= tag) order."""
    arrs = stream.scan_bulk()
    if arrs is not None:
        values, tags = arrs
        where = tags[values == level]
        return int(where[j - 1])
    seen = 0
    for v, t in stream.scan():
        if v == level:
            seen += 1
            if seen == j:
                return t
    raise AssertionError("occurrence vanished between passes")


# -- randomized batched pivots ------------------------------------------------


def _select_randomized(stream, k, rng):
    lo = _NEG_INF            # exclusive lower bound (lex)
    hi: tuple[float, int] | None = None  # exclusive upper bound; None = +inf
    below = 0                # pairs lexicographically <= lo
    total: int | None = None

    while True:
        count, pivots = _sample_pass(stream, lo, hi, rng)
        if total is None:
            total = count  # first round runs unbounded
            stream.length = total
            if count == 0:
                return None, None, 0
            if k is None:
                k = (total + 1) // 2
            if k < 1 or k > total:
                return None, None, total
        if count == 0:
            raise AssertionError("target bucket emptied; stream not re-iterable?")
        target = k - below
        if count <= len(pivots):
            # the reservoir saw everything in range
            v, t = pivots[target - 1]
            return v, t, total
        buckets = _bucket_pass(stream, lo, hi, pivots)
        placed = False
        cum = 0
        for j, piv in enumerate(pivots):
            if target <= cum + buckets[j]:
                hi = piv
                below += cum
                placed = True
                break
            cum += buckets[j]
            if target == cum + 1:
                return piv[0], piv[1], total
            cum += 1
            lo = piv
        if not placed:
            assert target > cum, "rank walk lost the target"
            below += cum
        # bounds narrowed; next round re-enumerates the smaller range


def _sample_pass(stream, lo, hi, rng):
    """One pass: count in-range pairs and reservoir-sample a pivot batch."""
    arrs = stream.scan_bulk()
    if arrs is not None:
        values, tags = arrs
        mask = _lex_gt_arr(values, tags, lo)
        if hi is not None:
            mask &= ~_lex_gt_arr(values, tags, (hi[0], hi[1] - 1))
        idx = np.flatnonzero(mask)
        count = int(idx.size)
        if count == 0:
            return 0, []
        take = min(_PIVOT_BATCH, count)
        chosen = rng.choice(count, size=take, replace=False)
        pivots = sorted(
            (float(values[idx[c]]), int(tags[idx[c]])) for c in chosen
        )
        return count, pivots
    count = 0
    pivots: list[tuple[float, int]] = []
    for v, t in stream.scan():
        if not _lex_gt(v, t, lo):
            continue
        if hi is not None and not _lex_gt(hi[0], hi[1], (v, t)):
            continue
        count += 1
        if count <= _PIVOT_BATCH:
            pivots.append((v, t))
        else:
            j = int(rng.integers(1, count + 1))
            if j <= _PIVOT_BATCH:
                pivots[j - 1] = (v, t)
    pivots.sort()
    return count, pivots


def _bucket_pass(stream, lo, hi, pivots):
    """One pass: in-range population strictly between consecutive pivots."""
    arrs = stream.scan_bulk()
    if arrs is not None:
        values, tags = arrs
        mask = _lex_gt_arr(values, tags, lo)
        if hi is not None:
            mask &= ~_lex_gt_arr(values, tags, (hi[0], hi[1] - 1))
        counts = []
        prev = lo
        for piv in pivots:
            m = mask & _lex_gt_arr(values, tags, prev)
            m &= ~_lex_gt_arr(values, tags, (piv[0], piv[1] - 1))
            counts.append(int(np.count_nonzero(m)))
            prev = piv
        return counts
    counts = [0] * len(pivots)
    for v, t in stream.scan():
        if not _lex_gt(v, t, lo):
            continue
        if hi is not None and not _lex_gt(hi[0], hi[1], (v, t)):
            continue
        for j, piv in enumerate(pivots):
            if _lex_gt(piv[0], piv[1], (v, t)):
                if j == 0 or _lex_gt(v, t, pivots[j - 1]):
                    counts[j] += 1
                break
    return counts
