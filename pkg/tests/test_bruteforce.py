import math

import numpy as np
import pytest

from constspace.bruteforce import (
    _adjacency,
    _center_on_edge_exhaustive,
    _distances_from,
    oracle_centroid,
    oracle_constrained_center,
    oracle_mec,
    oracle_split,
    oracle_tree_1center,
    oracle_weighted_median,
)
from constspace.instances import random_points, random_tree
from constspace.tree import RomTree


def test_golden_section_symmetric_pair():
    rep = oracle_constrained_center([(1.0, 1.0), (1.0, -1.0)], 0.0)
    assert abs(rep.witness[1]) < 1e-9
    assert abs(rep.value - math.sqrt(2.0)) < 1e-12


def test_golden_section_single_point():
    # the objective is flat to machine precision within sqrt(eps) of the
    # valley, so the argument is only locatable to ~1e-8 even though the
    # bracket shrinks to 1e-12
    rep = oracle_constrained_center([(3.0, 5.0)], 0.0)
    assert abs(rep.witness[1] - 5.0) < 1e-7
    assert abs(rep.value - 3.0) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_golden_section_agrees_with_grid_sweep(seed):
    pts = random_points(80, seed)
    rep = oracle_constrained_center(pts, 0.0)
    ys = np.linspace(-25, 25, 200_001)
    xs = np.array([p[0] for p in pts])
    py = np.array([p[1] for p in pts])
    g = np.sqrt(xs[None, :] ** 2 + (py[None, :] - ys[:, None]) ** 2).max(axis=1)
    assert rep.value <= g.min() + 1e-7


def test_mec_two_points():
    rep = oracle_mec([(0.0, 0.0), (2.0, 0.0)])
    assert abs(rep.value - 1.0) < 1e-12
    assert abs(rep.witness[0] - 1.0) < 1e-12


def test_mec_equilateral():
    pts = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]
    rep = oracle_mec(pts)
    assert abs(rep.value - 1 / math.sqrt(3)) < 1e-12


def test_mec_cocircular_radius_unique():
    pts = [
        (math.cos(2 * math.pi * k / 7) * 2.5, math.sin(2 * math.pi * k / 7) * 2.5)
        for k in range(7)
    ]
    rep = oracle_mec(pts)
    assert abs(rep.value - 2.5) < 1e-9


def test_mec_size_guard():
    with pytest.raises(ValueError):
        oracle_mec(random_points(300, 0))


def test_centroid_oracle_trivials():
    assert oracle_centroid(RomTree([-1, 0, 1])).witness == [1]
    assert oracle_centroid(RomTree([-1, 0, 0, 0])).witness == [0]


def test_weighted_median_equivalence_holds_on_random_trees():
    # the oracle itself raises if the weighted-centroid and distance-sum
    # minimizers ever disagree
    for seed in range(30):
        tree = random_tree(int(np.random.default_rng(seed).integers(2, 120)), seed)
        oracle_weighted_median(tree)


def test_edge_envelope_trivial():
    rep = oracle_tree_1center(RomTree([-1, 0], weights=[2.0, 1.0], lengths=[1.0, 3.0]))
    assert abs(rep.value - 2.0) < 1e-12
    u, v, x = rep.witness
    assert {u, v} == {0, 1} and abs(x - 1.0) < 1e-12


def test_split_oracle_path4():
    rep = oracle_split(RomTree([-1, 0, 1, 2]))
    assert abs(rep.value - 0.5) < 1e-12
    assert sorted(rep.witness) == [1, 2]


@pytest.mark.parametrize("seed", range(4))
def test_envelope_minimum_matches_dense_sampling(seed):
    tree = random_tree(40, seed + 60)
    rep = oracle_tree_1center(tree)
    adj = _adjacency(tree)
    verts = np.arange(tree.n)
    best = math.inf
    for v in range(tree.n):
        p = int(tree._parents[v])
        if p == -1:
            continue
        du = _distances_from(tree, p, adj)
        dv = _distances_from(tree, v, adj)
        length = float(tree._lengths[v])
        xs = np.linspace(0.0, length, 10_001)
        u_side = du < dv
        slope = np.where(u_side, tree._weights, -tree._weights)
        icept = np.where(u_side, tree._weights * du, tree._weights * (dv + length))
        h = (slope[None, :] * xs[:, None] + icept[None, :]).max(axis=1)
        best = min(best, float(h.min()))
    assert rep.value <= best + 1e-6
    # the grid undershoots by at most max-slope * half a grid step
    resolution = 10.0 * float(tree._lengths.max()) / 10_000
    assert rep.value >= best - resolution
