"""Text formats for points and trees.

Points file: one "x y" pair per line, '#' starts a comment, blank lines
ignored.  Tree file: first data line is the vertex count n, followed by n
lines "vertex_id parent_id weight edge_length" with parent_id -1 for the
root; children are ordered by line appearance.
"""

from __future__ import annotations

from .tree import RomTree


class FormatError(ValueError):
    pass


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_points(text: str) -> list[tuple[float, float]]:
    points = []
    for lineno, line in _data_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'x y', got {line!r}")
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
    if not points:
        raise FormatError("no points in file")
    return points


def load_points(path: str) -> list[tuple[float, float]]:
    with open(path, encoding="utf-8") as fh:
        return parse_points(fh.read())


def parse_tree(text: str) -> RomTree:
    lines = list(_data_lines(text))
    if not lines:
        raise FormatError("empty tree file")
    try:
        n = int(lines[0][1])
    except ValueError as exc:
        raise FormatError(f"line {lines[0][0]}: vertex count expected") from exc
    if n < 1:
        raise FormatError("vertex count must be positive")
    if len(lines) - 1 != n:
        raise FormatError(f"expected {n} vertex lines, found {len(lines) - 1}")
    parents = [None] * n
    weights = [0.0] * n
    lengths = [1.0] * n
    order = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 4:
            raise FormatError(
                f"line {lineno}: expected 'vertex_id parent_id weight edge_length'"
            )
        try:
            v, p = int(parts[0]), int(parts[1])
            w, length = float(parts[2]), float(parts[3])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from exc
        if not 0 <= v < n:
            raise FormatError(f"line {lineno}: vertex id {v} out of range")
        if parents[v] is not None:
            raise FormatError(f"line {lineno}: duplicate vertex {v}")
        parents[v] = p
        weights[v] = w
        lengths[v] = length if p != -1 else 1.0
        order.append(v)
    try:
        return RomTree(parents, weights, lengths, child_order=order)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def load_tree(path: str) -> RomTree:
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())
