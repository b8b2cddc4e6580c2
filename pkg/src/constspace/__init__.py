"""Constant-workspace facility location over instrumented read-only inputs.

Euclidean 1-center (free and line-constrained) by prune-and-search over a
virtual pairing tree, and tree facility location (centroid, weighted median,
weighted 1-center and 2-center) by constant-register descents, all metered so
the constant-space and pass-count claims are testable.
"""

from .geometry import OrientedLine, Point2
from .line_center import Side, bisector_hit, constrained_1center, query_side
from .model import (
    AccessMode,
    MeteredSequence,
    Metrics,
    PointSequence,
    RegisterBank,
    SequentialReadError,
    SpaceBudgetError,
    metrics,
)
from .plane_center import (
    On,
    PlaneSide,
    clip_triangle,
    decide_on_line,
    euclidean_1center,
    initial_triangle,
)
from .selection import Deterministic, RandomizedPivot, ValueStream, median, select_kth
from .tree import (
    HalfPart,
    RomTree,
    TreeCursor,
    TreeWindow,
    dfs_cursor,
    junction,
    subtree_size,
    subtree_weight,
    window_contains,
    window_root,
)
from .tree_center import (
    CenterResult,
    EdgeLocation,
    center_on_edge,
    find_center_edge,
    find_split_edge,
    max_weighted_vertex,
    weighted_1center,
    weighted_2center,
    weighted_radius,
)
from .tree_median import (
    centroid,
    find_maximum_subtree,
    find_maximum_weighted_subtree,
    weighted_median,
)

__all__ = [
    "AccessMode",
    "CenterResult",
    "Deterministic",
    "EdgeLocation",
    "HalfPart",
    "MeteredSequence",
    "Metrics",
    "On",
    "OrientedLine",
    "PlaneSide",
    "Point2",
    "PointSequence",
    "RandomizedPivot",
    "RegisterBank",
    "RomTree",
    "SequentialReadError",
    "Side",
    "SpaceBudgetError",
    "TreeCursor",
    "TreeWindow",
    "ValueStream",
    "bisector_hit",
    "center_on_edge",
    "centroid",
    "clip_triangle",
    "constrained_1center",
    "decide_on_line",
    "dfs_cursor",
    "euclidean_1center",
    "find_center_edge",
    "find_maximum_subtree",
    "find_maximum_weighted_subtree",
    "find_split_edge",
    "initial_triangle",
    "junction",
    "max_weighted_vertex",
    "median",
    "metrics",
    "query_side",
    "select_kth",
    "subtree_size",
    "subtree_weight",
    "weighted_1center",
    "weighted_2center",
    "weighted_median",
    "weighted_radius",
    "window_contains",
    "window_root",
]
