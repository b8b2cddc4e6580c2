"""Relative-tolerance float comparisons used by the geometric predicates.

All comparisons scale the tolerance by max(1, |a|, |b|) so that the same
relative epsilon works for coordinates of any magnitude.
"""

DEFAULT_EPS = 1e-9


def scale(*values: float) -> float:
    s = 1.0
    for v in values:
        a = abs(v)
        if a > s:
            s = a
    return s


def eq(a: float, b: float, eps: float = DEFAULT_EPS) -> bool:
    return abs(a - b) <= eps * scale(a, b)


def lt(a: float, b: float, eps: float = DEFAULT_EPS) -> bool:
    return b - a > eps * scale(a, b)


def le(a: float, b: float, eps: float = DEFAULT_EPS) -> bool:
    return a - b <= eps * scale(a, b)


def is_zero(a: float, eps: float = DEFAULT_EPS, ref: float = 1.0) -> bool:
    return abs(a) <= eps * max(1.0, abs(ref))
