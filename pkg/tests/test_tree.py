import numpy as np
import pytest

from constspace.bruteforce import _adjacency, _distances_from
from constspace.instances import random_tree
from constspace.tree import (
    HalfPart,
    RomTree,
    TreeCursor,
    TreeWindow,
    bfs_arrays,
    dfs_cursor,
    junction,
    side_of,
    subtree_size,
    subtree_weight,
    window_contains,
    window_root,
)


def path3():
    #  0 -> 1 -> 2 rooted at 0
    return RomTree([-1, 0, 1])


def star(k=3, weights=None):
    return RomTree([-1] + [0] * k, weights)


def recursive_dfs(tree, start, forbidden=None):
    """Conventional recursive traversal oracle (unrestricted memory)."""
    adj = [[v for v, _l in nb] for nb in _adjacency(tree)]
    seen = set()

    def go(u, came):
        seen.add(u)
        for v in adj[u]:
            if v != came and v not in seen:
                go(v, u)

    seen.add(start)
    for v in adj[start]:
        if v != forbidden:
            go(v, start)
    return seen


# -- DCEL queries ---------------------------------------------------------------


def test_parent_query():
    t = path3()
    assert t.parent(2) == 1
    assert t.parent(0) is None


def test_first_child_of_leaf():
    assert path3().first_child(2) is None


def test_next_child_order():
    s = star(3)
    assert s.first_child(0) == 1
    assert s.next_child(0, 2) == 3
    assert s.next_child(0, 3) is None
    with pytest.raises(ValueError):
        s.next_child(1, 2)


def test_tree_validation():
    with pytest.raises(ValueError):
        RomTree([-1, -1])  # two roots
    with pytest.raises(ValueError):
        RomTree([0, 1])  # no root / cycle
    with pytest.raises(ValueError):
        RomTree([-1, 0], lengths=[1.0, 0.0])  # nonpositive length


# -- walks ------------------------------------------------------------------------


def test_cursor_path_from_end():
    t = path3()
    assert list(dfs_cursor(t, 0)) == [0, 1, 2]


def test_cursor_star_with_forbidden_child():
    s = star(3)
    seen = list(dfs_cursor(s, 0, forbidden=1))
    assert seen == [0, 2, 3]


def test_cursor_component_above():
    t = path3()
    # from 1 avoiding child 2: walks 1 then climbs to 0
    assert sorted(dfs_cursor(t, 1, forbidden=2)) == [0, 1]


@pytest.mark.parametrize("seed", range(6))
def test_cursor_matches_recursive_dfs(seed):
    tree = random_tree(500, seed)
    rng = np.random.default_rng(seed + 100)
    for _ in range(5):
        start = int(rng.integers(0, tree.n))
        nbrs = tree.neighbors(start)
        forbidden = int(rng.choice(nbrs)) if nbrs and rng.random() < 0.5 else None
        got = sorted(dfs_cursor(tree, start, forbidden=forbidden))
        want = sorted(recursive_dfs(tree, start, forbidden))
        assert got == want


def test_cursor_probe_bound():
    tree = random_tree(400, 3)
    before = tree.seq.probes
    cur = TreeCursor(tree, tree.root)
    visits = sum(1 for _ in cur)
    probes = tree.seq.probes - before
    assert visits == tree.n
    assert probes <= 2 * visits + 8


def test_cursor_distances():
    tree = random_tree(200, 9)
    adj = _adjacency(tree)
    start = 17
    dist = _distances_from(tree, start, adj)
    cur = TreeCursor(tree, start)
    while True:
        ev = cur.step()
        if ev is None:
            break
        kind, v, d, _branch, _w = ev
        assert abs(d - dist[v]) < 1e-9


# -- aggregates -------------------------------------------------------------------


def test_subtree_size_path():
    t = path3()
    assert subtree_size(t, 1, 0) == 1
    assert subtree_size(t, 1, 2) == 1
    assert subtree_size(t, 0, 1) == 2


def test_subtree_weight_star():
    s = star(3, weights=[1.0, 7.0, 2.0, 3.0])
    assert subtree_weight(s, 0, 1) == 7.0


@pytest.mark.parametrize("seed", range(4))
def test_subtree_sums_to_n_minus_1(seed):
    tree = random_tree(120, seed)
    rng = np.random.default_rng(seed)
    for v in rng.integers(0, tree.n, size=8):
        v = int(v)
        total = sum(subtree_size(tree, v, t) for t in tree.neighbors(v))
        assert total == tree.n - 1


@pytest.mark.parametrize("seed", range(4))
def test_subtree_aggregates_match_oracle(seed):
    tree = random_tree(150, seed + 40)
    adj = _adjacency(tree)
    rng = np.random.default_rng(seed)
    for _ in range(6):
        v = int(rng.integers(0, tree.n))
        for t in tree.neighbors(v):
            comp = recursive_dfs(tree, t, forbidden=v)
            assert subtree_size(tree, v, t) == len(comp)
            want_w = sum(float(tree._weights[u]) for u in comp)
            assert abs(subtree_weight(tree, v, t) - want_w) < 1e-9


# -- junction ---------------------------------------------------------------------


def test_junction_star():
    s = star(3)
    assert junction(s, 1, 2, 3) == 0


def test_junction_on_path_degenerate():
    t = RomTree([-1, 0, 1, 2])  # path 0-1-2-3
    assert junction(t, 0, 2, 3) == 2


@pytest.mark.parametrize("seed", range(5))
def test_junction_matches_path_intersection_oracle(seed):
    tree = random_tree(200, seed)
    parents = tree._parents
    def path_to_root(x):
        out = [x]
        while parents[out[-1]] != -1:
            out.append(int(parents[out[-1]]))
        return out
    def path(a, b):
        pa, pb = path_to_root(a), path_to_root(b)
        sa = set(pa)
        meet = next(x for x in pb if x in sa)
        return pa[: pa.index(meet) + 1] + pb[: pb.index(meet)][::-1]
    rng = np.random.default_rng(seed + 7)
    for _ in range(20):
        a, b, c = (int(x) for x in rng.choice(tree.n, size=3, replace=False))
        want = (set(path(a, b)) & set(path(a, c)) & set(path(b, c))).pop()
        assert junction(tree, a, b, c) == want
        assert junction(tree, b, c, a) == want
        assert junction(tree, c, a, b) == want


# -- windows ----------------------------------------------------------------------


def test_empty_window_contains_everything():
    tree = random_tree(50, 1)
    w = TreeWindow.whole(tree)
    assert all(window_contains(w, v) for v in range(tree.n))
    assert window_root(w) == tree.root


def test_window_pair_on_path():
    t = path3()
    w = TreeWindow(t, (1, 2), None)  # keep {1} + subtree of 2
    assert window_contains(w, 1) and window_contains(w, 2)
    assert not window_contains(w, 0)
    assert window_root(w) == 1


@pytest.mark.parametrize("seed", range(6))
def test_window_matches_explicit_construction(seed):
    tree = random_tree(120, seed + 11)
    rng = np.random.default_rng(seed)
    for _ in range(10):
        v = int(rng.integers(1, tree.n))
        u = int(tree._parents[v])
        if rng.random() < 0.5:
            u, v = v, u  # keep the upper side instead
        w = TreeWindow(tree, (u, v), None)
        explicit = recursive_dfs(tree, v, forbidden=u) | {u}
        got = {x for x in range(tree.n) if window_contains(w, x)}
        assert got == explicit


def test_half_part_membership():
    tree = random_tree(80, 5)
    v = 13
    u = int(tree._parents[v])
    part = HalfPart(tree, v, u)
    comp = recursive_dfs(tree, v, forbidden=u)
    assert {x for x in range(tree.n) if part.contains(x)} == comp
    assert part.root() == v


def test_side_of():
    t = RomTree([-1, 0, 1, 1, 0])  # 0 -> {1 -> {2, 3}, 4}
    assert side_of(t, 1, 2) == 2
    assert side_of(t, 1, 4) == 0
    assert side_of(t, 0, 3) == 1


# -- bulk kernel -------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(5))
def test_bfs_arrays_matches_cursor_sets(seed):
    tree = random_tree(300, seed + 3)
    adj = _adjacency(tree)
    rng = np.random.default_rng(seed)
    for _ in range(4):
        anchor = int(rng.integers(0, tree.n))
        nbrs = tree.neighbors(anchor)
        forbidden = int(rng.choice(nbrs)) if nbrs and rng.random() < 0.5 else -1
        sweep = bfs_arrays(tree, anchor, forbidden=forbidden)
        want = recursive_dfs(tree, anchor, None if forbidden == -1 else forbidden)
        assert sorted(sweep.order.tolist()) == sorted(want)
        full = _distances_from(tree, anchor, adj)
        assert np.allclose(sweep.dist, full[sweep.order])
        for v, b in zip(sweep.order.tolist(), sweep.branch.tolist()):
            if v != anchor:
                assert side_of(tree, anchor, v) == b
        assert sweep.offsets[-1] == sweep.order.size


def test_bfs_arrays_charges_counters():
    tree = random_tree(100, 2)
    p0, s0 = tree.seq.probes, tree.seq.scans
    sweep = bfs_arrays(tree, tree.root)
    assert tree.seq.probes - p0 == sweep.order.size
    assert tree.seq.scans - s0 == 1
