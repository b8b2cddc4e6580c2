import numpy as np
import pytest

from constspace.bruteforce import (
    _max_subtree_table,
    oracle_centroid,
    oracle_weighted_median,
)
from constspace.instances import random_path_tree, random_tree
from constspace.model import RegisterBank
from constspace.tree import RomTree, TreeWindow, subtree_size, subtree_weight
from constspace.tree_median import (
    centroid,
    find_maximum_subtree,
    find_maximum_weighted_subtree,
    weighted_median,
)
from constspace.tree_median import _max_subtree


def path3():
    return RomTree([-1, 0, 1])


# -- find_maximum_subtree ----------------------------------------------------------


def test_fms_path_end():
    t = path3()
    m, delta, tm = find_maximum_subtree(t, 0, None, 0)
    assert (m, tm, delta) == (1, 2, 1)


def test_fms_star_ties_pick_first_child():
    # all five subtrees are singletons: the first child wins the tie, and the
    # left-behind region is everything but that subtree (the center included)
    s = RomTree([-1, 0, 0, 0, 0, 0])
    m, delta, tm = find_maximum_subtree(s, 0, None, 0)
    assert m == 1 and tm == 1 and delta == 5


@pytest.mark.parametrize("seed", range(8))
def test_fms_matches_full_memory_recomputation(seed):
    tree = random_tree(120, seed)
    rng = np.random.default_rng(seed + 1)
    for _ in range(6):
        t = int(rng.integers(0, tree.n))
        nbrs = tree.neighbors(t)
        t_prev = int(rng.choice(nbrs)) if nbrs and rng.random() < 0.6 else None
        size = subtree_size(tree, t, t_prev) if t_prev is not None else 0
        m, delta, tm = find_maximum_subtree(tree, t, t_prev, size)
        sizes = {v: subtree_size(tree, t, v) for v in nbrs}
        assert tm == max(sizes.values())
        assert sizes[m] == tm
        assert delta == tree.n - size - tm


def test_fms_round_bound():
    # rounds stay proportional to the size of the region left behind; when the
    # already-explored side stays maximal nothing new can bound them but the
    # remaining component itself
    rng = np.random.default_rng(5)
    for seed in range(10):
        tree = random_tree(300, seed + 50)
        t = int(rng.integers(0, tree.n))
        nbrs = tree.neighbors(t)
        t_prev = int(rng.choice(nbrs)) if len(nbrs) > 1 else None
        size = subtree_size(tree, t, t_prev) if t_prev is not None else 0
        scan = _max_subtree(tree, t, t_prev, size, 0.0, tree.n, 0.0, None, False)
        if scan.best == t_prev:
            budget = 2 * (tree.n - size) + 8
        else:
            budget = 2 * (tree.n - size - scan.best_count) + 8
        assert scan.rounds <= budget


def test_fms_weighted_two_vertices():
    # the left-behind region is the heavy root itself
    t = RomTree([-1, 0], weights=[5.0, 1.0])
    m, delta, delta_w, wtm = find_maximum_weighted_subtree(t, 0, None, 0, 0.0)
    assert m == 1 and wtm == 1.0 and delta == 1 and delta_w == 5.0


@pytest.mark.parametrize("seed", range(6))
def test_fms_weighted_matches_oracle(seed):
    tree = random_tree(90, seed + 9)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        t = int(rng.integers(0, tree.n))
        nbrs = tree.neighbors(t)
        t_prev = int(rng.choice(nbrs)) if nbrs and rng.random() < 0.5 else None
        size = subtree_size(tree, t, t_prev) if t_prev is not None else 0
        wsize = subtree_weight(tree, t, t_prev) if t_prev is not None else 0.0
        m, delta, delta_w, wtm = find_maximum_weighted_subtree(
            tree, t, t_prev, size, wsize
        )
        weights = {v: subtree_weight(tree, t, v) for v in nbrs}
        assert abs(wtm - max(weights.values())) < 1e-9
        assert abs(weights[m] - wtm) < 1e-9
        assert delta == tree.n - size - max(
            subtree_size(tree, t, v) for v in nbrs if abs(weights[v] - wtm) < 1e-9
        ) or delta == tree.n - size - subtree_size(tree, t, m)


# -- centroid ----------------------------------------------------------------------


def test_centroid_path():
    assert centroid(path3()) == 1


def test_centroid_star():
    assert centroid(RomTree([-1, 0, 0, 0, 0])) == 0


def test_centroid_single_vertex():
    assert centroid(RomTree([-1])) == 0


@pytest.mark.parametrize("n,seed", [(100, 0), (500, 1), (1000, 2)])
def test_centroid_minimizes_maxs(n, seed):
    tree = random_tree(n, seed)
    v = centroid(tree)
    max_s, _ = _max_subtree_table(tree)
    report = oracle_centroid(tree)
    assert v in report.witness
    assert max_s[v] == report.value
    assert max_s[v] <= n // 2


def test_centroid_window_restricted():
    # path 0-1-2-3-4; window keeps {2,3,4}; centroid of that path is 3
    tree = RomTree([-1, 0, 1, 2, 3])
    w = TreeWindow(tree, (2, 3), None)
    assert centroid(tree, part=w) == 3


# -- weighted median ---------------------------------------------------------------


def test_weighted_median_path_unit():
    tree = RomTree([-1, 0, 1], weights=[1.0, 1.0, 1.0])
    assert weighted_median(tree) == 1


def test_weighted_median_heavy_vertex():
    tree = RomTree([-1, 0], weights=[5.0, 1.0])
    assert weighted_median(tree) == 0


@pytest.mark.parametrize("n,seed", [(60, 3), (200, 4), (500, 5)])
def test_weighted_median_matches_sumwd_argmin(n, seed):
    tree = random_tree(n, seed)
    v = weighted_median(tree)
    report = oracle_weighted_median(tree)
    assert v in report.witness
    _, max_ws = _max_subtree_table(tree)
    w_total = float(tree._weights.sum())
    assert max_ws[v] <= w_total / 2 + 1e-9 * w_total


def test_weighted_median_zero_total_weight():
    tree = RomTree([-1, 0], weights=[0.0, 0.0])
    with pytest.raises(ValueError):
        weighted_median(tree)


# -- instrumentation ----------------------------------------------------------------


@pytest.mark.parametrize("maker", [random_tree, random_path_tree])
def test_probe_linearity(maker):
    per_n = {}
    for n in (1024, 2048, 4096):
        probes = 0
        for seed in range(5):
            tree = maker(n, seed)
            before = tree.seq.probes
            centroid(tree)
            probes += tree.seq.probes - before
        per_n[n] = probes / 5
        assert per_n[n] <= 12 * n, f"centroid probes {per_n[n]} > 12n at n={n}"
    ratio = per_n[2048] / per_n[1024]
    assert 1.8 <= ratio <= 2.2


def test_weighted_probe_bound():
    for n in (1024, 4096):
        tree = random_tree(n, 7)
        before = tree.seq.probes
        weighted_median(tree)
        assert tree.seq.probes - before <= 12 * n


def test_peak_registers_constant():
    peaks = set()
    for n in (256, 1024, 4096):
        tree = random_tree(n, 11)
        bank = RegisterBank()
        centroid(tree, bank=bank)
        peaks.add(bank.peak)
    assert len(peaks) == 1 and peaks.pop() <= 64
