"""Seeded random instances for verification and benchmarks.

Points are uniform in [-10, 10]^2; trees grow by random parent attachment
with weights uniform on (0, 10] and edge lengths uniform on (0, 5], which
keeps depths logarithmic and runs reproducible.
"""

from __future__ import annotations

import numpy as np

from .tree import RomTree


def random_points(n: int, seed: int) -> list[tuple[float, float]]:
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-10.0, 10.0, n)
    ys = rng.uniform(-10.0, 10.0, n)
    return list(zip(xs.tolist(), ys.tolist()))


def random_tree(n: int, seed: int) -> RomTree:
    rng = np.random.default_rng(seed)
    parents = [-1] + [int(rng.integers(0, i)) for i in range(1, n)]
    weights = (10.0 - rng.uniform(0.0, 10.0, n)).tolist()   # uniform on (0, 10]
    lengths = (5.0 - rng.uniform(0.0, 5.0, n)).tolist()     # uniform on (0, 5]
    return RomTree(parents, weights, lengths)


def random_path_tree(n: int, seed: int) -> RomTree:
    """Path-shaped instance; worst case for depth-sensitive walks."""
    rng = np.random.default_rng(seed)
    parents = [-1] + list(range(n - 1))
    weights = (10.0 - rng.uniform(0.0, 10.0, n)).tolist()
    lengths = (5.0 - rng.uniform(0.0, 5.0, n)).tolist()
    return RomTree(parents, weights, lengths)
