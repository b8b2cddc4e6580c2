"""Plane primitives: points, oriented lines, rotated frames, triangles.

The frame convention used throughout: an oriented line is ``anchor + t * d``
with unit direction ``d``.  Its frame maps a point P to

    u = (P - anchor) . n        (signed offset; n is d rotated 90 deg ccw)
    v = (P - anchor) . d        (position along the line)

so the line itself becomes the vertical axis ``u = 0`` and "left" is ``u > 0``.
Rotations preserve distances, which is all the algorithms rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from . import approx


class Point2(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point2:
    pt = Point2(float(p[0]), float(p[1]))
    if not (math.isfinite(pt.x) and math.isfinite(pt.y)):
        raise ValueError("point coordinates must be finite")
    return pt


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def dist2(p, q) -> float:
    dx, dy = p[0] - q[0], p[1] - q[1]
    return dx * dx + dy * dy


class OrientedLine(NamedTuple):
    """Line through ``anchor`` with unit direction ``direction``."""

    anchor: Point2
    direction: Point2

    @staticmethod
    def vertical(x: float) -> "OrientedLine":
        return OrientedLine(Point2(float(x), 0.0), Point2(0.0, 1.0))

    @staticmethod
    def from_slope(anchor, slope: float) -> "OrientedLine":
        if math.isinf(slope):
            d = Point2(0.0, 1.0)
        else:
            norm = math.hypot(1.0, slope)
            d = Point2(1.0 / norm, slope / norm)
        return OrientedLine(as_point(anchor), d)

    @staticmethod
    def from_coefficients(a: float, b: float, c: float) -> "OrientedLine":
        """Line ax + by = c, oriented along (b, -a); left side is ax + by > c."""
        norm = math.hypot(a, b)
        if norm == 0.0:
            raise ValueError("degenerate line: a = b = 0")
        if abs(b) > abs(a):
            anchor = Point2(0.0, c / b)
        else:
            anchor = Point2(c / a, 0.0)
        return OrientedLine(anchor, Point2(b / norm, -a / norm))

    @property
    def normal(self) -> Point2:
        return Point2(-self.direction.y, self.direction.x)

    def offset(self, p) -> float:
        """Signed perpendicular offset (the frame u coordinate)."""
        n = self.normal
        return (p[0] - self.anchor.x) * n.x + (p[1] - self.anchor.y) * n.y

    def along(self, p) -> float:
        """Position along the line (the frame v coordinate)."""
        d = self.direction
        return (p[0] - self.anchor.x) * d.x + (p[1] - self.anchor.y) * d.y

    def point_at(self, v: float) -> Point2:
        return Point2(
            self.anchor.x + v * self.direction.x,
            self.anchor.y + v * self.direction.y,
        )

    def perpendicular_at(self, p) -> "OrientedLine":
        return OrientedLine(as_point(p), self.normal)


def bisector_offsets(p, q, line: OrientedLine) -> tuple[float, float]:
    """Frame coefficients of dist2(x, p) - dist2(x, q) for x = line.point_at(v).

    The difference is linear in v: returns (value at v=0, slope).  Positive
    values mean x is farther from p than from q.
    """
    u0 = line.anchor
    d = line.direction
    c0 = dist2(u0, p) - dist2(u0, q)
    slope = 2.0 * ((p[0] - q[0]) * d.x + (p[1] - q[1]) * d.y)
    # dist2(x,p) - dist2(x,q) = c0 - slope * v  with this sign convention:
    # d/dv [ (x-p)^2 ] = 2 (x0 + v d - p) . d
    return c0, -slope


def segment_crosses_line(a, b, line: OrientedLine, eps: float = approx.DEFAULT_EPS) -> bool:
    ua, ub = line.offset(a), line.offset(b)
    s = approx.scale(ua, ub)
    return (ua > eps * s and ub < -eps * s) or (ua < -eps * s and ub > eps * s)


@dataclass(frozen=True)
class Triangle:
    """Feasible region for the planar search: three vertices, maybe collapsed.

    ``collapsed`` flags a region whose area underflowed; the vertices are kept
    so sidedness tests still bound the optimum.
    """

    a: Point2
    b: Point2
    c: Point2
    collapsed: bool = False

    @property
    def vertices(self) -> tuple[Point2, Point2, Point2]:
        return (self.a, self.b, self.c)

    def area2(self) -> float:
        return abs(cross(self.a, self.b, self.c))

    def contains(self, p, eps: float = 1e-9) -> bool:
        s1 = cross(self.a, self.b, p)
        s2 = cross(self.b, self.c, p)
        s3 = cross(self.c, self.a, p)
        ref = max(approx.scale(self.a.x, self.a.y, self.b.x, self.b.y), 1.0)
        tol = eps * ref * ref
        neg = s1 < -tol or s2 < -tol or s3 < -tol
        pos = s1 > tol or s2 > tol or s3 > tol
        return not (neg and pos)


def cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def clip_polygon(poly: Sequence[Point2], line: OrientedLine, keep_sign: int,
                 eps: float = approx.DEFAULT_EPS) -> list[Point2]:
    """Sutherland-Hodgman clip of a convex polygon against a half-plane.

    keep_sign=+1 keeps the left side (offset >= 0), -1 the right side.
    """
    if not poly:
        return []
    out: list[Point2] = []
    n = len(poly)
    offs = [line.offset(p) * keep_sign for p in poly]
    ref = max(1.0, max(abs(o) for o in offs))
    tol = eps * ref
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        op, oq = offs[i], offs[(i + 1) % n]
        if op >= -tol:
            out.append(p)
        if (op > tol and oq < -tol) or (op < -tol and oq > tol):
            t = op / (op - oq)
            out.append(Point2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)))
    return dedupe_ring(out, eps)


def dedupe_ring(poly: Sequence[Point2], eps: float = approx.DEFAULT_EPS) -> list[Point2]:
    out: list[Point2] = []
    for p in poly:
        if not out or not points_close(out[-1], p, eps):
            out.append(p)
    if len(out) > 1 and points_close(out[0], out[-1], eps):
        out.pop()
    return out


def points_close(p, q, eps: float = approx.DEFAULT_EPS) -> bool:
    return approx.eq(p[0], q[0], eps) and approx.eq(p[1], q[1], eps)


# -- exact enclosing circles of constant-sized point sets --------------------


def circle_two(p, q) -> tuple[Point2, float]:
    c = Point2((p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0)
    return c, max(dist(c, p), dist(c, q))


def circumcircle(a, b, c) -> Optional[tuple[Point2, float]]:
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if d == 0.0:
        return None
    sa = a[0] * a[0] + a[1] * a[1]
    sb = b[0] * b[0] + b[1] * b[1]
    sc = c[0] * c[0] + c[1] * c[1]
    ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d
    uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d
    center = Point2(ux, uy)
    return center, max(dist(center, a), dist(center, b), dist(center, c))


def enclosing_circle_small(points: Sequence[Point2]) -> tuple[Point2, float]:
    """Minimum enclosing circle of a handful of points (incremental, exact).

    Move-to-front style construction over at most a few dozen points; used
    for the final stage after pruning, never on full inputs.
    """
    pts = [as_point(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    best: tuple[Point2, float] | None = None
    c = Point2(pts[0].x, pts[0].y)
    best = (c, 0.0)
    for i, p in enumerate(pts[1:], start=1):
        if _covered(best, p):
            continue
        best = (p, 0.0)
        for j, q in enumerate(pts[:i]):
            if _covered(best, q):
                continue
            best = circle_two(p, q)
            for r in pts[:j]:
                if _covered(best, r):
                    continue
                cand = circumcircle(p, q, r)
                if cand is None:
                    # collinear triple: widest diametral pair covers it
                    cand = max(
                        (circle_two(p, q), circle_two(p, r), circle_two(q, r)),
                        key=lambda cr: cr[1],
                    )
                best = cand
    return best


def _covered(circle: tuple[Point2, float], p, slack: float = 1e-12) -> bool:
    c, r = circle
    return dist(c, p) <= r * (1.0 + slack) + slack
