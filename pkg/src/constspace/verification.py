"""Running algorithms against their reference solvers.

One entry point per concern: ``solve`` runs an algorithm and renders its
result; ``verify_instance`` runs algorithm and oracle on one instance and
compares at the problem's tolerance; the observer factories wire the
debug-mode checks (feasible region keeps the reference optimum, per-iteration
pruning floors, window invariant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import bruteforce, engine, line_center, plane_center, tree_center, tree_median
from .geometry import OrientedLine
from .model import AccessMode, PointSequence, RegisterBank, metrics
from .selection import Deterministic, RandomizedPivot
from .instances import random_points, random_tree
from .tree import RomTree

POINT_PROBLEMS = ("center", "center-line")
TREE_PROBLEMS = ("tree-centroid", "tree-median", "tree-1center", "tree-2center")
PROBLEMS = POINT_PROBLEMS + TREE_PROBLEMS

TOLERANCE = {
    "center": 1e-7,
    "center-line": 1e-7,
    "tree-centroid": 0.0,
    "tree-median": 1e-12,
    "tree-1center": 1e-9,
    "tree-2center": 1e-9,
}


def strategy_from_name(name: str, seed: int = 0):
    if name == "det":
        return Deterministic()
    if name == "rand":
        return RandomizedPivot(seed)
    raise ValueError(f"unknown selection strategy {name!r}")


def solve(
    problem: str,
    data,
    *,
    line: OrientedLine | None = None,
    sequential: bool = False,
    strategy=None,
    eps: float = 1e-9,
    bank: RegisterBank | None = None,
    observer=None,
    hook=None,
) -> dict:
    """Run one algorithm; returns the result dictionary for rendering."""
    bank = bank if bank is not None else RegisterBank()
    if problem == "center":
        seq = PointSequence(data)
        c, r = plane_center.euclidean_1center(
            seq, bank=bank, strategy=strategy, eps=eps, observer=observer
        )
        return {"cx": c.x, "cy": c.y, "radius": r, "_seq": seq}
    if problem == "center-line":
        mode = AccessMode.FORWARD if sequential else AccessMode.RANDOM
        seq = PointSequence(data, mode=mode)
        c, r = line_center.constrained_1center(
            seq, line=line or OrientedLine.vertical(0.0),
            bank=bank, strategy=strategy, eps=eps, observer=observer,
        )
        return {"cx": c.x, "cy": c.y, "radius": r, "_seq": seq}
    tree: RomTree = data
    if problem == "tree-centroid":
        v = tree_median.centroid(tree, bank=bank)
        return {"vertex": v, "_seq": tree.seq}
    if problem == "tree-median":
        v = tree_median.weighted_median(tree, bank=bank)
        return {"vertex": v, "_seq": tree.seq}
    if problem == "tree-1center":
        res = tree_center.weighted_1center(
            tree, bank=bank, strategy=strategy, eps=eps,
            observer=observer, hook=hook,
        )
        return {
            "edge": [res.location.u, res.location.v],
            "offset": res.location.offset,
            "radius": res.radius,
            "_seq": tree.seq,
        }
    if problem == "tree-2center":
        a, b = tree_center.weighted_2center(
            tree, bank=bank, strategy=strategy, eps=eps, hook=hook
        )
        return {
            "centers": [
                {"edge": [a.location.u, a.location.v],
                 "offset": a.location.offset, "radius": a.radius},
                {"edge": [b.location.u, b.location.v],
                 "offset": b.location.offset, "radius": b.radius},
            ],
            "objective": max(a.radius, b.radius),
            "_seq": tree.seq,
        }
    raise ValueError(f"unknown problem {problem!r}")


def render_text(problem: str, result: dict) -> str:
    if problem in ("center", "center-line"):
        return f"{result['cx']!r} {result['cy']!r} {result['radius']!r}"
    if problem in ("tree-centroid", "tree-median"):
        return f"vertex {result['vertex']}"
    if problem == "tree-1center":
        u, v = result["edge"]
        return f"edge {u} {v} {result['offset']!r} {result['radius']!r}"
    lines = [
        f"edge {c['edge'][0]} {c['edge'][1]} {c['offset']!r} {c['radius']!r}"
        for c in result["centers"]
    ]
    return "\n".join(lines + [f"objective {result['objective']!r}"])


def random_instance(problem: str, n: int, seed: int):
    if problem in POINT_PROBLEMS:
        return random_points(n, seed)
    return random_tree(n, seed)


@dataclass
class VerifyOutcome:
    problem: str
    ok: bool
    algorithm: float
    reference: float
    detail: str = ""


def verify_instance(problem: str, data, *, strategy=None, eps: float = 1e-9,
                    debug_region: bool = False, seed: int = 0) -> VerifyOutcome:
    """Algorithm against reference on one instance, with optional per-iteration
    region checks wired through the engine observer."""
    tol = TOLERANCE[problem]
    checks: list[Callable] = []
    if problem == "center":
        report = bruteforce.oracle_mec(data)
        observer = None
        if debug_region:
            observer = region_contains_check(
                problem, point=(report.witness[0], report.witness[1])
            )
        result = solve(problem, data, strategy=strategy, eps=eps, observer=observer)
        got, want = result["radius"], report.value
        ok = abs(got - want) <= tol * max(1.0, want)
        return VerifyOutcome(problem, ok, got, want)
    if problem == "center-line":
        report = bruteforce.oracle_constrained_center(data, 0.0)
        observer = None
        if debug_region:
            observer = region_contains_check(problem, value=report.witness[1])
        result = solve(problem, data, strategy=strategy, eps=eps, observer=observer)
        got, want = result["radius"], report.value
        ok = abs(got - want) <= tol * max(1.0, want)
        return VerifyOutcome(problem, ok, got, want)
    tree: RomTree = data
    if problem == "tree-centroid":
        report = bruteforce.oracle_centroid(tree)
        v = tree_median.centroid(tree)
        maxs, _ = bruteforce._max_subtree_table(tree)
        ok = v in report.witness and int(maxs[v]) == int(report.value)
        return VerifyOutcome(problem, ok, float(maxs[v]), report.value)
    if problem == "tree-median":
        report = bruteforce.oracle_weighted_median(tree)
        v = tree_median.weighted_median(tree)
        _, maxws = bruteforce._max_subtree_table(tree)
        ok = v in report.witness and abs(float(maxws[v]) - report.value) <= (
            tol * max(1.0, report.value)
        )
        return VerifyOutcome(problem, ok, float(maxws[v]), report.value)
    if problem == "tree-1center":
        report = bruteforce.oracle_tree_1center(tree)
        hook = window_invariant_check(tree)
        if debug_region:
            got = _w1c_with_region_check(tree, strategy, eps, hook)
        else:
            got = tree_center.weighted_1center(
                tree, strategy=strategy, eps=eps, hook=hook
            ).radius
        ok = abs(got - report.value) <= tol * max(1.0, report.value)
        return VerifyOutcome(problem, ok, got, report.value)
    if problem == "tree-2center":
        report = bruteforce.oracle_split(tree)
        hook = window_invariant_check(tree)
        a, b = tree_center.weighted_2center(tree, strategy=strategy, eps=eps, hook=hook)
        got = max(a.radius, b.radius)
        ok = abs(got - report.value) <= tol * max(1.0, report.value)
        return VerifyOutcome(problem, ok, got, report.value)
    raise ValueError(f"unknown problem {problem!r}")


def _w1c_with_region_check(tree, strategy, eps, hook) -> float:
    """1-center with the envelope stage checked against the edge oracle."""
    bank = RegisterBank()
    u, v = tree_center.find_center_edge(tree, bank=bank, hook=hook)
    from .bruteforce import _adjacency, _center_on_edge_exhaustive, _distances_from

    adj = _adjacency(tree)
    length = tree.edge_len(u, v)
    du = _distances_from(tree, u, adj)
    dv = _distances_from(tree, v, adj)
    x_ref, _val = _center_on_edge_exhaustive(tree._weights, du, dv, length)
    observer = region_contains_check("tree-1center", value=x_ref)
    res = tree_center.center_on_edge(
        tree, u, v, bank=bank, strategy=strategy, eps=eps, observer=observer
    )
    return res.radius


class RegionCheckError(AssertionError):
    pass


def region_contains_check(problem: str, value: float | None = None,
                          point=None) -> engine.Observer:
    """Observer asserting the reference optimum stays inside the region."""

    def check(stats: engine.IterationStats):
        region = stats.region_after
        if region is None:
            return
        if isinstance(region, engine.Interval):
            if value is not None and not (
                region.lo - 1e-7 <= value <= region.hi + 1e-7
            ):
                raise RegionCheckError(
                    f"{problem}: optimum {value} left region {region}"
                )
        else:
            if point is not None and not region.contains(point, 1e-6):
                raise RegionCheckError(
                    f"{problem}: optimum {point} left region {region}"
                )

    return check


def prune_floor_check(fraction_denominator: int) -> engine.Observer:
    """Observer asserting each iteration retires its share of valid pairs."""

    def check(stats: engine.IterationStats):
        floor = stats.valid_before // fraction_denominator
        if stats.pruned < floor:
            raise RegionCheckError(
                f"pruned {stats.pruned} of {stats.valid_before}, floor {floor}"
            )

    return check


def stack_observers(*observers) -> engine.Observer:
    live = [o for o in observers if o is not None]

    def run(stats):
        for o in live:
            o(stats)

    return run


def window_invariant_check(tree: RomTree):
    """Hook asserting at most two window leaves are internal tree vertices."""
    from .tree import compose_parts

    def check(window, _c):
        comp = compose_parts(None, window)
        inside = [v for v in range(tree.n) if comp is None or comp.contains(v)]
        inside_set = set(inside)
        bad = 0
        for v in inside:
            live = [
                u for u in tree.neighbors(v)
                if u in inside_set and (comp is None or not comp.edge_blocked(v, u))
            ]
            if len(live) <= 1 and len(tree.neighbors(v)) > 1:
                bad += 1
        if bad > 2:
            raise RegionCheckError(
                f"window {window.pair1} {window.pair2} has {bad} internal leaves"
            )

    return check
