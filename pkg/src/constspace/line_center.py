"""Euclidean 1-center constrained to a line.

Works in the line's frame: an element is seen as (u, v) where u is its
perpendicular offset and v its position along the line, so the squared
distance from the candidate center at parameter y is u^2 + (v - y)^2.  The
line defaults to a vertical one (``x = x_L``); arbitrary orientations rotate
each element on the fly during the read, which costs O(1) registers and lets
the unconstrained search reuse this module for any query line.

The prune-and-search plugin follows the dominance relation "p dominates q
iff p is strictly farther from every point of the feasible interval", with
degenerate pairs (identical points, mirror pairs whose bisector is the line
itself, bisector hits on the region boundary) resolved by keeping the
lower-tagged element.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import approx, engine, selection
from .engine import Dominance, Found, Interval, ValidPair
from .geometry import OrientedLine, Point2, as_point
from .model import AccessMode, MeteredSequence, PointSequence, RegisterBank

# Persistent wrapper state: line frame, result slots, verification temps.
LINE_WORDS = 8
# Query pass state: running max, three farthest-set flags, tolerance temps.
QUERY_WORDS = 8


class CutKind(enum.Enum):
    HIT = "hit"
    PARALLEL = "parallel"
    COINCIDENT = "coincident"


class BisectorCut(NamedTuple):
    kind: CutKind
    y: Optional[float]


def bisector_hit(p, q, x_l: float, eps: float = approx.DEFAULT_EPS) -> BisectorCut:
    """Where the perpendicular bisector of p, q meets the vertical line x = x_l.

    PARALLEL means the bisector never meets the line; COINCIDENT means the
    bisector is the line itself (mirror pair).  Raises on p == q.
    """
    p, q = as_point(p), as_point(q)
    s = approx.scale(p.x, p.y, q.x, q.y)
    if abs(p.x - q.x) <= eps * s and abs(p.y - q.y) <= eps * s:
        raise ValueError("degenerate pair: identical points have no bisector")
    if abs(p.y - q.y) <= eps * s:
        mid = 0.5 * (p.x + q.x)
        if abs(mid - x_l) <= eps * approx.scale(mid, x_l):
            return BisectorCut(CutKind.COINCIDENT, None)
        return BisectorCut(CutKind.PARALLEL, None)
    y = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y
         - 2.0 * x_l * (q.x - p.x)) / (2.0 * (q.y - p.y))
    return BisectorCut(CutKind.HIT, y)


class Side(enum.Enum):
    AT = "at"
    ABOVE = "above"
    BELOW = "below"


def query_side(points, x_l: float, m: float, eps: float = approx.DEFAULT_EPS) -> Side:
    """Which side of y = m the constrained optimum lies on.

    Two passes: the farthest distance from (x_l, m), then the spread of the
    farthest set.  A farthest set that is not strictly one-sided (including
    any farthest point at height m) pins the optimum at m itself.
    """
    seq = _as_sequence(points)
    plugin = _LinePlugin(seq, OrientedLine.vertical(x_l), eps, None)
    outcome = plugin.query(m, Interval())
    if isinstance(outcome, Found):
        return Side.AT
    return Side.ABOVE if outcome.lo == m else Side.BELOW


def constrained_1center(
    points,
    x_l: float | None = None,
    *,
    line: OrientedLine | None = None,
    bank: RegisterBank | None = None,
    cutoff: int = engine.DEFAULT_CUTOFF,
    strategy: selection.Strategy | None = None,
    eps: float = approx.DEFAULT_EPS,
    observer: engine.Observer | None = None,
) -> tuple[Point2, float]:
    """Center on the line minimizing the maximum distance to the points.

    Returns (center, radius); the radius is recomputed against every point in
    one final pass, so it is exact for the returned center regardless of the
    search path.
    """
    if line is None:
        if x_l is None:
            raise ValueError("give either x_l or an oriented line")
        line = OrientedLine.vertical(x_l)
    seq = _as_sequence(points)
    if len(seq) < 1:
        raise ValueError("need at least one point")
    bank = bank if bank is not None else RegisterBank()
    with bank.acquire(LINE_WORDS):
        plugin = _LinePlugin(seq, line, eps, bank)
        y, _r = engine.run(
            plugin, bank=bank, cutoff=cutoff, strategy=strategy, observer=observer
        )
        center = line.point_at(y)
        radius = math.sqrt(plugin.max_dist2_at(y))
    return center, radius


def _as_sequence(points) -> MeteredSequence:
    if isinstance(points, MeteredSequence):
        return points
    return PointSequence(points)


class _LinePlugin:
    """Prune-and-search plugin for the line-constrained center."""

    def __init__(self, seq, line: OrientedLine, eps: float, bank):
        self.seq = seq
        self.line = line
        self.eps = eps
        self.bank = bank
        self.n = len(seq)
        self.supports_bulk = (
            isinstance(seq, PointSequence) and seq.mode is AccessMode.RANDOM
        )
        self._uv: tuple[np.ndarray, np.ndarray] | None = None

    # -- element access -------------------------------------------------------

    def begin_pass(self):
        self.seq.begin_pass()

    def end_pass(self):
        self.seq.count_scan()

    def read(self, i: int) -> tuple[float, float]:
        x, y = self.seq.read(i)
        return self.line.offset((x, y)), self.line.along((x, y))

    def charge_pass(self):
        self.seq.account(self.n, 1)

    def _uv_pass(self) -> tuple[np.ndarray, np.ndarray]:
        """Frame coordinates of all points; charges one pass per call."""
        if self._uv is None:
            xs, ys = self.seq.pass_xy()
            ax, ay = self.line.anchor
            nx, ny = self.line.normal
            dx, dy = self.line.direction
            us = (xs - ax) * nx + (ys - ay) * ny
            vs = (xs - ax) * dx + (ys - ay) * dy
            self._uv = (us, vs)
        else:
            self.seq.account(self.n, 1)
        return self._uv

    # -- dominance -------------------------------------------------------------

    def initial_region(self) -> Interval:
        return Interval()

    def dominance(self, i: int, j: int, region: Interval):
        """Trichotomy for positions i < j; reads both records (test surface)."""
        ri = self.read(i)
        rj = self.read(j)
        return self.dominance_records(ri, i, rj, j, region)

    def dominance_records(self, ra, ta, rb, tb, region: Interval):
        ua, va = ra
        ub, vb = rb
        eps = self.eps
        s = approx.scale(ua, va, ub, vb)
        low = Dominance.P if ta < tb else Dominance.Q
        if abs(va - vb) <= eps * s:
            if abs(ua - ub) <= eps * s:
                return low  # identical points: keep the lower tag
            if abs(ua + ub) <= eps * s:
                return low  # mirror pair: bisector is the line itself
            # bisector parallel to the line: farther offset dominates everywhere
            return Dominance.P if abs(ua) > abs(ub) else Dominance.Q
        y = (ua * ua + va * va - ub * ub - vb * vb) / (2.0 * (va - vb))
        if region.contains(y, eps):
            return ValidPair(y)
        # hit outside or on the boundary: the distance order is constant on the
        # open region, so one interior sample decides true dominance (a tag
        # rule here would discard the binding point whenever the previous
        # median left its own hit sitting on the new boundary)
        sample = region.sample()
        da = ua * ua + (va - sample) ** 2
        db = ub * ub + (vb - sample) ** 2
        if da == db:
            return low
        return Dominance.P if da > db else Dominance.Q

    def bulk_corner_keys(self, region: Interval):
        us, vs = self._uv_pass()
        keys = []
        for corner, sign in ((region.lo, 1.0), (region.hi, -1.0)):
            if math.isfinite(corner):
                keys.append((us * us + (vs - corner) ** 2, None))
            else:
                # at y -> -inf the farthest element maximizes +v, at +inf -v;
                # ties fall back to the squared norm in the frame
                keys.append((sign * vs, us * us + vs * vs))
        return keys

    def bulk_pair_criticals(self, a_idx, b_idx, region: Interval):
        us, vs = self._uv_pass()
        ua, va = us[a_idx], vs[a_idx]
        ub, vb = us[b_idx], vs[b_idx]
        s = np.maximum.reduce([np.abs(ua), np.abs(va), np.abs(ub), np.abs(vb)])
        s = np.maximum(s, 1.0)
        parallel = np.abs(va - vb) <= self.eps * s
        denom = np.where(parallel, 1.0, 2.0 * (va - vb))
        y = (ua * ua + va * va - ub * ub - vb * vb) / denom
        return ~parallel & _inside_strict(y, region, self.eps), y

    # -- query and finish -------------------------------------------------------

    def query(self, m: float, region: Interval):
        dmax2, has_above, has_below, has_on = self._farthest_profile(m)
        if has_on or (has_above and has_below):
            return Found((m, math.sqrt(dmax2)))
        if has_above:
            return Interval(m, region.hi)
        return Interval(region.lo, m)

    def _farthest_profile(self, m: float):
        lease = self.bank.acquire(QUERY_WORDS) if self.bank is not None else None
        try:
            if self.supports_bulk:
                us, vs = self._uv_pass()
                d2 = us * us + (vs - m) ** 2
                dmax2 = float(d2.max())
                self.seq.account(self.n, 1)  # the flag pass
                far = d2 >= dmax2 * (1.0 - 2.0 * self.eps)
                tol = self.eps * np.maximum(1.0, np.maximum(np.abs(vs), abs(m)))
                above = bool(np.any(far & (vs > m + tol)))
                below = bool(np.any(far & (vs < m - tol)))
                on = bool(np.any(far & (np.abs(vs - m) <= tol)))
                return dmax2, above, below, on
            dmax2 = 0.0
            self.begin_pass()
            for i in range(self.n):
                u, v = self.read(i)
                d2 = u * u + (v - m) ** 2
                if d2 > dmax2:
                    dmax2 = d2
            self.end_pass()
            above = below = on = False
            self.begin_pass()
            for i in range(self.n):
                u, v = self.read(i)
                d2 = u * u + (v - m) ** 2
                if d2 < dmax2 * (1.0 - 2.0 * self.eps):
                    continue
                tol = self.eps * max(1.0, abs(v), abs(m))
                if v > m + tol:
                    above = True
                elif v < m - tol:
                    below = True
                else:
                    on = True
            self.end_pass()
            return dmax2, above, below, on
        finally:
            if lease is not None:
                lease.release()

    def max_dist2_at(self, y: float) -> float:
        """One full pass: squared radius of the candidate center at y."""
        if self.supports_bulk:
            us, vs = self._uv_pass()
            return float((us * us + (vs - y) ** 2).max())
        best = 0.0
        self.begin_pass()
        for i in range(self.n):
            u, v = self.read(i)
            d2 = u * u + (v - y) ** 2
            if d2 > best:
                best = d2
        self.end_pass()
        return best

    def brute_force(self, tags, region: Interval):
        """Exact finish: minimize the survivor max-distance over the region.

        Runs under the engine's survivor lease.  The minimizer of a max of
        distance profiles sits at a valley (v of one survivor), a crossing
        (a pairwise bisector hit), or a region endpoint, so the candidate set
        is exact.
        """
        self.begin_pass()
        recs = [self.read(t) for t in tags]
        self.end_pass()
        lo, hi = region.lo, region.hi
        cands: list[float] = []
        for u, v in recs:
            cands.append(min(max(v, lo), hi))
        for a in range(len(recs)):
            ua, va = recs[a]
            for b in range(a + 1, len(recs)):
                ub, vb = recs[b]
                if abs(va - vb) <= self.eps * approx.scale(ua, va, ub, vb):
                    continue
                y = (ua * ua + va * va - ub * ub - vb * vb) / (2.0 * (va - vb))
                if lo <= y <= hi:
                    cands.append(y)
        for bound in (lo, hi):
            if math.isfinite(bound):
                cands.append(bound)
        best_y, best_g = None, math.inf
        for y in cands:
            g = max(u * u + (v - y) ** 2 for u, v in recs)
            if g < best_g - 1e-18 or (g == best_g and (best_y is None or y < best_y)):
                best_y, best_g = y, g
        return best_y, math.sqrt(best_g)


def _inside_strict(y: np.ndarray, region: Interval, eps: float) -> np.ndarray:
    ok = np.isfinite(y)
    ref = np.maximum(1.0, np.abs(y))
    if math.isfinite(region.lo):
        ok &= (y - region.lo) > eps * np.maximum(ref, abs(region.lo))
    if math.isfinite(region.hi):
        ok &= (region.hi - y) > eps * np.maximum(ref, abs(region.hi))
    return ok
