"""Unconstrained Euclidean 1-center (minimum enclosing circle center).

Prune-and-search in the plane over the same virtual pairing tree as the line
case, except the feasible region is a triangle and the per-iteration query is
"which side of this line is the center on" (decide-on-a-line), answered by a
line-constrained search plus a constant number of passes over the farthest
set.

Per iteration over the valid survivor pairs: take the median bisector slope,
re-pair bisectors across it by rank, take the median intersection point in
the frame rotated so that the median slope becomes an axis, and cut the plane
with two perpendicular decide calls.  The resulting quadrant is folded into
the triangle region with at most two more decide calls (triangulating the
clipped polygon and binary-searching the fan), so an iteration never spends
more than four decide calls.  Pairs whose bisector misses the new triangle
are dead; nothing is ever marked, the next survivor recovery just sees them
dominated.

When fewer than four bisector pairs remain the median machinery is skipped:
the region is cut directly along one remaining bisector per iteration.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import approx, engine, selection
from .engine import Dominance, IterationStats, Observer, ValidPair, block_count
from .geometry import (
    OrientedLine,
    Point2,
    Triangle,
    as_point,
    clip_polygon,
    cross,
    dedupe_ring,
    enclosing_circle_small,
)
from .line_center import constrained_1center
from .model import AccessMode, MeteredSequence, PointSequence, RegisterBank
from .selection import ValueStream

# Driver state held across an iteration: triangle, phase/iteration counters,
# the current cut line and its side.
PLANE_WORDS = 13
# decide-on-a-line: optimum-on-line slot plus radius, then the farthest-set
# extremes (two points per side) and the chord temporaries.
DECIDE_BASE_WORDS = 4
DECIDE_STEP_WORDS = 12
# the line searches nested under the planar driver finish their last few
# survivors earlier so the whole call chain stays inside one 64-word bank
_INNER_CUTOFF = 7


class PlaneSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class On:
    """The queried line passes through the center."""

    center: Point2


class HalfPlane(NamedTuple):
    line: OrientedLine
    side: PlaneSide

    @property
    def keep_sign(self) -> int:
        return 1 if self.side is PlaneSide.LEFT else -1


Quadrant = tuple[HalfPlane, HalfPlane]


class _CenterFound(Exception):
    def __init__(self, center: Point2):
        self.center = center


def decide_on_line(
    points,
    line: OrientedLine,
    *,
    bank: RegisterBank | None = None,
    cutoff: int = engine.DEFAULT_CUTOFF,
    strategy: selection.Strategy | None = None,
    eps: float = approx.DEFAULT_EPS,
) -> On | PlaneSide:
    """Which side of the oriented line holds the 1-center.

    Three steps over the farthest set F from the line-constrained optimum:
    one-sided F settles the side; F straddling the line with the optimum
    inside the hull chord window means the center is on the line; otherwise
    the midpoint of the farthest pair of F points the way.
    """
    seq = _as_sequence(points)
    bank = bank if bank is not None else RegisterBank()
    with bank.acquire(DECIDE_BASE_WORDS):
        center, radius = constrained_1center(
            seq, line=line, bank=bank, cutoff=cutoff, strategy=strategy, eps=eps
        )
        y_star = line.along(center)
        with bank.acquire(DECIDE_STEP_WORDS):
            prof = _farthest_extremes(seq, line, center, radius, eps)
            left = prof.left_hi is not None or prof.on_hi is not None
            right = prof.right_hi is not None or prof.on_hi is not None
            if not right:
                return PlaneSide.LEFT
            if not left:
                return PlaneSide.RIGHT
            # hull containment: x* is the center iff it sits between the
            # extreme crossings of hull(F) with the line; on-line farthest
            # points are crossings of their own
            crossings: list[float] = []
            if prof.on_hi is not None:
                crossings += [prof.on_hi[1], prof.on_lo[1]]
            if prof.left_hi is not None and prof.right_hi is not None:
                crossings.append(_chord_cut(prof.left_hi, prof.right_hi))
                crossings.append(_chord_cut(prof.left_lo, prof.right_lo))
            tol = eps * approx.scale(y_star, *crossings)
            if min(crossings) - tol <= y_star <= max(crossings) + tol:
                return On(center)
            extremes = [
                p for p in (prof.left_hi, prof.left_lo, prof.right_hi,
                            prof.right_lo, prof.on_hi, prof.on_lo)
                if p is not None
            ]
            a, b = max(
                ((p, q) for i, p in enumerate(extremes) for q in extremes[i + 1 :]),
                key=lambda pq: _pair_d2(*pq),
            )
            mid_u = 0.5 * (a[0] + b[0])
            if approx.is_zero(mid_u, eps, ref=approx.scale(a[0], b[0], radius)):
                return On(center)
            return PlaneSide.LEFT if mid_u > 0 else PlaneSide.RIGHT


@dataclass
class _FarProfile:
    left_hi: Optional[tuple[float, float]] = None  # (u, v), max-v far point, u > 0
    left_lo: Optional[tuple[float, float]] = None
    right_hi: Optional[tuple[float, float]] = None
    right_lo: Optional[tuple[float, float]] = None
    on_hi: Optional[tuple[float, float]] = None    # far points on the line itself
    on_lo: Optional[tuple[float, float]] = None


def _farthest_extremes(seq, line, center, radius, eps) -> _FarProfile:
    y_star = line.along(center)
    thresh = (radius * radius) * (1.0 - 2.0 * eps)
    prof = _FarProfile()

    def feed(u, v):
        tol = eps * max(1.0, abs(u), abs(v))
        if abs(u) <= tol:
            if prof.on_hi is None or v > prof.on_hi[1]:
                prof.on_hi = (u, v)
            if prof.on_lo is None or v < prof.on_lo[1]:
                prof.on_lo = (u, v)
        elif u > 0:
            if prof.left_hi is None or v > prof.left_hi[1]:
                prof.left_hi = (u, v)
            if prof.left_lo is None or v < prof.left_lo[1]:
                prof.left_lo = (u, v)
        else:
            if prof.right_hi is None or v > prof.right_hi[1]:
                prof.right_hi = (u, v)
            if prof.right_lo is None or v < prof.right_lo[1]:
                prof.right_lo = (u, v)

    if isinstance(seq, PointSequence) and seq.mode is AccessMode.RANDOM:
        xs, ys = seq.pass_xy()
        ax, ay = line.anchor
        us = (xs - ax) * line.normal.x + (ys - ay) * line.normal.y
        vs = (xs - ax) * line.direction.x + (ys - ay) * line.direction.y
        d2 = us * us + (vs - y_star) ** 2
        for i in np.flatnonzero(d2 >= thresh):
            feed(float(us[i]), float(vs[i]))
        return prof
    seq.begin_pass()
    for i in range(len(seq)):
        x, y = seq.read(i)
        u = line.offset((x, y))
        v = line.along((x, y))
        if u * u + (v - y_star) ** 2 >= thresh:
            feed(u, v)
    seq.count_scan()
    return prof


def _chord_cut(p, q) -> float:
    """v coordinate where the chord between opposite-side points crosses u=0."""
    (u1, v1), (u2, v2) = p, q
    return v1 - u1 * (v2 - v1) / (u2 - u1)


def _pair_d2(p, q) -> float:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


# -- triangle maintenance -----------------------------------------------------


def _bbox_poly(seq) -> list[Point2]:
    if isinstance(seq, PointSequence) and seq.mode is AccessMode.RANDOM:
        xs, ys = seq.pass_xy()
        x0, x1 = float(xs.min()), float(xs.max())
        y0, y1 = float(ys.min()), float(ys.max())
    else:
        seq.begin_pass()
        x0 = y0 = math.inf
        x1 = y1 = -math.inf
        for i in range(len(seq)):
            x, y = seq.read(i)
            x0, x1 = min(x0, x), max(x1, x)
            y0, y1 = min(y0, y), max(y1, y)
        seq.count_scan()
    pad = 1e-9 * max(1.0, abs(x0), abs(x1), abs(y0), abs(y1))
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    return [Point2(x0, y0), Point2(x1, y0), Point2(x1, y1), Point2(x0, y1)]


def _ccw(poly: list[Point2]) -> list[Point2]:
    area = 0.0
    for i in range(len(poly)):
        j = (i + 1) % len(poly)
        area += poly[i].x * poly[j].y - poly[j].x * poly[i].y
    return poly if area >= 0 else poly[::-1]


def _poly_to_triangle(poly: list[Point2]) -> Triangle:
    if len(poly) >= 3:
        return Triangle(poly[0], poly[1], poly[2])
    if len(poly) == 2:
        return Triangle(poly[0], poly[1], poly[1], collapsed=True)
    if len(poly) == 1:
        return Triangle(poly[0], poly[0], poly[0], collapsed=True)
    raise RuntimeError("feasible region vanished (numerically empty clip)")


def _restrict(poly: list[Point2], halfplanes, decide, eps) -> tuple[Triangle, int]:
    """Clip the polygon, then select the fan triangle holding the center.

    Returns the triangle and the number of decide calls spent (<= 2: the clip
    of a triangle by two half-planes has at most five sides, the initial
    bounding box at most six, and the fan is binary-searched).
    """
    for hp in halfplanes:
        poly = clip_polygon(poly, hp.line, hp.keep_sign, eps)
    poly = _ccw(dedupe_ring(poly, eps))
    calls = 0
    while len(poly) > 3:
        k = len(poly) // 2
        diag = OrientedLine(poly[0], _unit(poly[0], poly[k]))
        outcome = decide(diag)
        calls += 1
        if isinstance(outcome, On):
            raise _CenterFound(outcome.center)
        if outcome is PlaneSide.RIGHT:
            poly = poly[: k + 1]
        else:
            poly = [poly[0]] + poly[k:]
    return _poly_to_triangle(poly), calls


def _unit(a: Point2, b: Point2) -> Point2:
    d = math.hypot(b.x - a.x, b.y - a.y)
    if d == 0.0:
        raise RuntimeError("degenerate fan diagonal")
    return Point2((b.x - a.x) / d, (b.y - a.y) / d)


def initial_triangle(points, quadrant: Quadrant, **kw) -> Triangle:
    """Triangle inside (bounding box of the points) ∩ quadrant holding the center."""
    seq = _as_sequence(points)
    decide, _bank = _decider(seq, **kw)
    try:
        tri, _ = _restrict(_bbox_poly(seq), quadrant, decide, kw.get("eps", approx.DEFAULT_EPS))
        return tri
    except _CenterFound as found:
        return Triangle(found.center, found.center, found.center, collapsed=True)


def clip_triangle(points, tri: Triangle, quadrant: Quadrant, **kw) -> Triangle:
    """Triangle inside tri ∩ quadrant still holding the center."""
    seq = _as_sequence(points)
    decide, _bank = _decider(seq, **kw)
    try:
        new, _ = _restrict(list(tri.vertices), quadrant, decide,
                           kw.get("eps", approx.DEFAULT_EPS))
        return new
    except _CenterFound as found:
        return Triangle(found.center, found.center, found.center, collapsed=True)


def _decider(seq, **kw):
    bank = kw.get("bank") or RegisterBank()

    def decide(line):
        return decide_on_line(
            seq, line, bank=bank,
            cutoff=kw.get("cutoff", engine.DEFAULT_CUTOFF),
            strategy=kw.get("strategy"), eps=kw.get("eps", approx.DEFAULT_EPS),
        )

    return decide, bank


def _as_sequence(points) -> MeteredSequence:
    if isinstance(points, MeteredSequence):
        return points
    return PointSequence(points)


# -- the planar plugin ---------------------------------------------------------


class _PlanePlugin:
    """Survivor recovery and pair features for the planar pairing tree."""

    def __init__(self, seq: PointSequence, eps: float, bank):
        self.seq = seq
        self.eps = eps
        self.bank = bank
        self.n = len(seq)
        self.supports_bulk = True
        self._xy: tuple[np.ndarray, np.ndarray] | None = None

    def begin_pass(self):
        self.seq.begin_pass()

    def end_pass(self):
        self.seq.count_scan()

    def read(self, i: int):
        return self.seq.read(i)

    def charge_pass(self):
        self.seq.account(self.n, 1)

    def _xy_pass(self):
        if self._xy is None:
            self._xy = self.seq.pass_xy()
        else:
            self.seq.account(self.n, 1)
        return self._xy

    def dominance(self, i: int, j: int, region):
        return self.dominance_records(self.read(i), i, self.read(j), j, region)

    def dominance_records(self, ra, ta, rb, tb, region: Triangle | None):
        ax, ay = ra
        bx, by = rb
        low = Dominance.P if ta < tb else Dominance.Q
        s = approx.scale(ax, ay, bx, by)
        if abs(ax - bx) <= self.eps * s and abs(ay - by) <= self.eps * s:
            return low
        if region is None:
            return ValidPair(0.0)
        tol = self.eps * max(1.0, s) * max(1.0, s)
        pos = neg = False
        for v in region.vertices:
            h = ((v.x - ax) ** 2 + (v.y - ay) ** 2) - ((v.x - bx) ** 2 + (v.y - by) ** 2)
            if h > tol:
                pos = True
            elif h < -tol:
                neg = True
        if pos and neg:
            return ValidPair(0.0)
        if pos:
            return Dominance.P
        if neg:
            return Dominance.Q
        return low

    def bulk_corner_keys(self, region: Triangle):
        xs, ys = self._xy_pass()
        return [
            ((xs - v.x) ** 2 + (ys - v.y) ** 2, None) for v in region.vertices
        ]

    def pair_features(self, a_idx, b_idx, region: Triangle | None):
        """Per-pair bisector data: validity, slope, line coefficients.

        The bisector of (a, b) is {x : x . n = c} with n = b - a and
        c = (|b|^2 - |a|^2) / 2; it crosses the triangle iff the distance
        difference changes sign over the vertices.
        """
        xs, ys = self._xy_pass()
        ax, ay = xs[a_idx], ys[a_idx]
        bx, by = xs[b_idx], ys[b_idx]
        nx_, ny_ = bx - ax, by - ay
        c = 0.5 * (bx * bx + by * by - ax * ax - ay * ay)
        s = np.maximum.reduce([np.abs(ax), np.abs(ay), np.abs(bx), np.abs(by)])
        s = np.maximum(s, 1.0)
        degen = (np.abs(nx_) <= self.eps * s) & (np.abs(ny_) <= self.eps * s)
        if region is None:
            valid = ~degen
        else:
            tol = self.eps * s * s
            pos = np.zeros(a_idx.shape, dtype=bool)
            neg = np.zeros(a_idx.shape, dtype=bool)
            for v in region.vertices:
                h = ((v.x - ax) ** 2 + (v.y - ay) ** 2) - (
                    (v.x - bx) ** 2 + (v.y - by) ** 2
                )
                pos |= h > tol
                neg |= h < -tol
            valid = ~degen & pos & neg
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.where(
                np.abs(ny_) <= 1e-300, np.inf, -nx_ / np.where(ny_ == 0, 1.0, ny_)
            )
        return valid, slope, nx_, ny_, c


# -- the driver ----------------------------------------------------------------


def euclidean_1center(
    points,
    *,
    bank: RegisterBank | None = None,
    cutoff: int = engine.DEFAULT_CUTOFF,
    strategy: selection.Strategy | None = None,
    eps: float = approx.DEFAULT_EPS,
    observer: Observer | None = None,
) -> tuple[Point2, float]:
    """Center and radius of the minimum enclosing circle.

    The returned radius is recomputed against every point for the returned
    center, and the run fails loudly rather than return an uncovering circle.
    """
    seq = _as_sequence(points)
    if len(seq) < 1:
        raise ValueError("need at least one point")
    if not isinstance(seq, PointSequence) or seq.mode is not AccessMode.RANDOM:
        raise ValueError("the planar search needs random-access point input")
    bank = bank if bank is not None else RegisterBank()
    if cutoff < 3:
        raise ValueError("cutoff must be at least 3")
    n = len(seq)
    with bank.acquire(PLANE_WORDS):
        plugin = _PlanePlugin(seq, eps, bank)

        def decide(line):
            return decide_on_line(
                seq, line, bank=bank, cutoff=_INNER_CUTOFF, strategy=strategy, eps=eps
            )

        try:
            # seed the feasible region before any pairing: the bounding box
            # holds the center, and one decide call picks its half
            region, _ = _restrict(_bbox_poly(seq), (), decide, eps)
            phase = 1
            while block_count(phase, n) > cutoff:
                region = _run_phase(
                    plugin, phase, region, decide, bank, strategy, observer, eps
                )
                phase += 1
            tags = _collect_survivors(plugin, phase, region)
            center = _finish(plugin, tags, region, eps, cutoff)
        except _CenterFound as found:
            center = found.center
        radius = math.sqrt(_max_d2(plugin, center))
    return center, radius


def _run_phase(plugin, phase, region, decide, bank, strategy, observer, eps):
    n = plugin.n
    blocks = block_count(phase, n)
    max_iter = 16 * max(1, int(math.log2(max(2, blocks)))) + 48
    pending: IterationStats | None = None
    for it in range(max_iter):
        memo: dict = {}
        data = _pair_data(plugin, phase, region, memo)
        count = int(data["tags"].size)
        if pending is not None:
            pending.valid_after = count
            if observer is not None:
                observer(pending)
            pending = None
        if count == 0:
            return region
        calls = 0
        if count <= 7:
            hp, used = _small_cut(plugin, data, decide)
            calls += used
            quadrant = (hp,)
        else:
            quadrant, used = _median_cuts(plugin, data, bank, strategy, decide, eps)
            calls += used
        new_region, used = _restrict(list(region.vertices), quadrant, decide, eps)
        calls += used
        assert calls <= 4, f"iteration spent {calls} decide calls"
        pending = IterationStats(phase, it, count, -1, region, new_region)
        region = new_region
    raise engine.RegionStallError(f"planar phase {phase} exceeded {max_iter} iterations")


def _pair_data(plugin, phase, region, memo):
    if "pairs" not in memo:
        surv = engine._bulk_survivors(plugin, phase, region)
        half = surv.shape[0] // 2
        a = surv[0 : 2 * half : 2]
        b = surv[1 : 2 * half : 2]
        valid, slope, nx_, ny_, c = plugin.pair_features(a, b, region)
        tags = np.flatnonzero(valid)
        memo["pairs"] = {
            "tags": tags,
            "slope": slope[tags],
            "nx": nx_[tags],
            "ny": ny_[tags],
            "c": c[tags],
        }
    return memo["pairs"]


def _stream(plugin, values, tags) -> ValueStream:
    arr_v = np.asarray(values, dtype=np.float64)
    arr_t = np.asarray(tags, dtype=np.int64)

    def gen():
        return iter(zip(arr_v.tolist(), arr_t.tolist()))

    def bulk():
        plugin.charge_pass()
        return arr_v, arr_t

    return ValueStream(gen, bulk=bulk, length=int(arr_v.size))


def _small_cut(plugin, data, decide):
    """Resolve one surviving bisector directly: cut the region along it."""
    nx_, ny_, c = float(data["nx"][0]), float(data["ny"][0]), float(data["c"][0])
    norm = math.hypot(nx_, ny_)
    anchor = Point2(c * nx_ / (norm * norm), c * ny_ / (norm * norm))
    line = OrientedLine(anchor, Point2(-ny_ / norm, nx_ / norm))
    outcome = decide(line)
    if isinstance(outcome, On):
        raise _CenterFound(outcome.center)
    return HalfPlane(line, outcome), 1


def _median_cuts(plugin, data, bank, strategy, decide, eps):
    local = np.arange(data["tags"].size)
    slope_m, tag_m = selection.median(
        _stream(plugin, data["slope"], local), strategy=strategy, bank=bank
    )
    frame = _slope_frame(slope_m)
    # Classify each bisector by the sign of its slope in the rotated frame,
    # not by its rank against the median: a direction more than 90 degrees
    # below the median axis wraps around and behaves like a steep positive
    # line, and pairing it as "low" would void the quadrant-miss guarantee
    # (one member of every pair crossing in the dead quadrant must miss the
    # new region, which is what retires pairs each iteration).
    wx, wy = -data["ny"], data["nx"]
    p = wx * frame.normal.x + wy * frame.normal.y
    q = wx * frame.direction.x + wy * frame.direction.y
    low = p * q <= 0
    lows = np.flatnonzero(low)
    highs = np.flatnonzero(~low)
    m2 = min(lows.size, highs.size)
    if m2 == 0:
        # every bisector shares the median slope: fall back to a direct cut
        return (_small_cut(plugin, data, decide)[0],), 1
    ix, iy, ok = _line_intersections(data, lows[:m2], highs[:m2])
    ix, iy = ix[ok], iy[ok]
    if ix.size == 0:
        return (_small_cut(plugin, data, decide)[0],), 1
    us = ix * frame.normal.x + iy * frame.normal.y
    vs = ix * frame.direction.x + iy * frame.direction.y
    ids = np.arange(us.size)
    u_m, t1 = selection.median(_stream(plugin, us, ids), strategy=strategy, bank=bank)
    t_point = Point2(float(ix[t1]), float(iy[t1]))
    line1 = OrientedLine(t_point, frame.direction)
    out1 = decide(line1)
    if isinstance(out1, On):
        raise _CenterFound(out1.center)
    # intersections on the side of line1 away from the center
    opp = us <= u_m if out1 is PlaneSide.LEFT else us >= u_m
    sel = np.flatnonzero(opp)
    v_m, t2 = selection.median(
        _stream(plugin, vs[sel], np.arange(sel.size)), strategy=strategy, bank=bank
    )
    t2_point = Point2(float(ix[sel[t2]]), float(iy[sel[t2]]))
    line2 = OrientedLine(t2_point, frame.normal)
    out2 = decide(line2)
    if isinstance(out2, On):
        raise _CenterFound(out2.center)
    return (HalfPlane(line1, out1), HalfPlane(line2, out2)), 2


def _slope_frame(slope: float) -> OrientedLine:
    if math.isinf(slope):
        d = Point2(0.0, 1.0)
    else:
        norm = math.hypot(1.0, slope)
        d = Point2(1.0 / norm, slope / norm)
    return OrientedLine(Point2(0.0, 0.0), d)


def _lex_lt(values, tags, v0, t0) -> np.ndarray:
    return (values < v0) | ((values == v0) & (tags < t0))


def _line_intersections(data, ai, bi):
    n1x, n1y, c1 = data["nx"][ai], data["ny"][ai], data["c"][ai]
    n2x, n2y, c2 = data["nx"][bi], data["ny"][bi], data["c"][bi]
    det = n1x * n2y - n1y * n2x
    scale = np.maximum(1.0, np.abs(n1x) + np.abs(n1y)) * np.maximum(
        1.0, np.abs(n2x) + np.abs(n2y)
    )
    ok = np.abs(det) > 1e-12 * scale
    safe = np.where(ok, det, 1.0)
    x = (c1 * n2y - c2 * n1y) / safe
    y = (n1x * c2 - n2x * c1) / safe
    return x, y, ok


def _collect_survivors(plugin, phase, region):
    surv = engine._bulk_survivors(plugin, phase, region)
    plugin.charge_pass()
    return [int(t) for t in surv]


def _finish(plugin, tags, region, eps, cutoff):
    xs, ys = plugin._xy_pass()
    pts = [Point2(float(xs[t]), float(ys[t])) for t in tags]
    words = 2 * cutoff + 8  # constant worst case keeps the peak size-blind
    lease = plugin.bank.acquire(words) if plugin.bank is not None else None
    try:
        center, r = enclosing_circle_small(pts)
        if _max_d2(plugin, center) <= (r * r) * (1.0 + 8.0 * eps) + eps:
            return center
        center = _constrained_small_center(pts, region)
        if _max_d2(plugin, center) <= _max_d2_pts(pts, center) * (1.0 + 8.0 * eps) + eps:
            return center
        raise RuntimeError("pruned point outside the final feasible region")
    finally:
        if lease is not None:
            lease.release()


def _max_d2(plugin, center) -> float:
    xs, ys = plugin._xy_pass()
    return float(((xs - center.x) ** 2 + (ys - center.y) ** 2).max())


def _max_d2_pts(pts, center) -> float:
    return max((p.x - center.x) ** 2 + (p.y - center.y) ** 2 for p in pts)


def _constrained_small_center(pts, region: Triangle) -> Point2:
    """Minimize the survivor max-distance over the triangle closure."""
    cands: list[Point2] = list(region.vertices)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            cands.append(Point2(0.5 * (pts[i].x + pts[j].x), 0.5 * (pts[i].y + pts[j].y)))
            for k in range(j + 1, len(pts)):
                from .geometry import circumcircle

                cc = circumcircle(pts[i], pts[j], pts[k])
                if cc is not None:
                    cands.append(cc[0])
    edges = [
        (region.a, region.b),
        (region.b, region.c),
        (region.c, region.a),
    ]
    for a, b in edges:
        if a == b:
            continue
        line = OrientedLine(a, _unit(a, b))
        span = line.along(b)
        vs: list[float] = [0.0, span]
        for p in pts:
            vs.append(line.along(p))
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                c0, slope = _h_coeffs(pts[i], pts[j], line)
                if slope != 0.0:
                    vs.append(-c0 / slope)
        for v in vs:
            if -1e-12 <= v <= span + 1e-12:
                cands.append(line.point_at(min(max(v, 0.0), span)))
    inside = [c for c in cands if region.contains(c, 1e-7)]
    pool = inside if inside else cands
    return min(pool, key=lambda c: _max_d2_pts(pts, c))


def _h_coeffs(p, q, line: OrientedLine) -> tuple[float, float]:
    from .geometry import bisector_offsets

    return bisector_offsets(p, q, line)
