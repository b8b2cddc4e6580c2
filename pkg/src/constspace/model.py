"""Instrumented read-only input and bounded mutable workspace.

Every algorithm in this package runs against two objects:

* :class:`MeteredSequence` holds the immutable input records and counts every
  element read (``probes``) and every completed pass (``scans``).  In
  ``FORWARD`` mode the sequence additionally rejects reads that move backwards
  within a pass, which models sequential-access read-only memory.

* :class:`RegisterBank` is the only mutable state an algorithm may use: a
  fixed pool of word-sized cells acquired in constant-sized leases at
  procedure entry.  Its high-water mark is the space metric; it must come out
  identical for every input size.

Counters live outside the bank on purpose: they are measurement apparatus,
not algorithm state.

Bulk helpers (``pass_values``, ``gather``, ``account``) let a pass run as one
vectorized sweep instead of n Python-level reads.  They charge the same
probes/scans the element-at-a-time pass would and keep the forward-order
discipline, so the metrics are identical on both execution paths.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


class AccessMode(enum.Enum):
    RANDOM = "random"
    FORWARD = "forward"


class SpaceBudgetError(RuntimeError):
    """An algorithm asked for more registers than its bank allows."""


class SequentialReadError(RuntimeError):
    """A backward read was attempted on a forward-only sequence."""


DEFAULT_CAPACITY = 64


class MeteredSequence:
    """Immutable record sequence with probe/scan counters.

    ``read`` is the only way to see an element, so ``probes`` is a faithful
    count of input touches.  A pass is opened with ``begin_pass`` and counted
    either by ``iterate`` (full passes) or ``count_scan`` (hand-rolled partial
    passes such as block walks).
    """

    def __init__(self, elements: Iterable, mode: AccessMode = AccessMode.RANDOM):
        self._elements = tuple(elements)
        self.mode = mode
        self.probes = 0
        self.scans = 0
        self.violations = 0
        self._cursor = -1  # last index read in the current pass

    def __len__(self) -> int:
        return len(self._elements)

    def read(self, i: int):
        if not 0 <= i < len(self._elements):
            raise IndexError(f"index {i} out of range [0, {len(self._elements)})")
        if self.mode is AccessMode.FORWARD:
            if i < self._cursor:
                self.violations += 1
                raise SequentialReadError(
                    f"backward read: index {i} after {self._cursor}"
                )
            self._cursor = i
        self.probes += 1
        return self._elements[i]

    def begin_pass(self) -> None:
        """Start a new pass; resets the forward-only cursor."""
        self._cursor = -1

    def count_scan(self, n: int = 1) -> None:
        """Record n completed passes made through read()/begin_pass()."""
        self.scans += n

    def iterate(self) -> Iterator[tuple[int, object]]:
        """One full pass in index order; counts a scan on completion."""
        self.begin_pass()
        for i in range(len(self._elements)):
            yield i, self.read(i)
        self.scans += 1

    # -- bulk pass interface ------------------------------------------------

    def account(self, probes: int, scans: int = 0) -> None:
        """Charge counters for a vectorized sweep executed out of line.

        Only meaningful in RANDOM mode; forward-only runs must stay on the
        element-at-a-time path so order violations remain detectable.
        """
        if self.mode is AccessMode.FORWARD:
            raise SequentialReadError("bulk accounting not available in forward mode")
        self.probes += probes
        self.scans += scans


class PointSequence(MeteredSequence):
    """Metered sequence of 2D points with coordinate arrays for bulk passes."""

    def __init__(self, points, mode: AccessMode = AccessMode.RANDOM):
        pts = [(float(x), float(y)) for x, y in points]
        for x, y in pts:
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ValueError("points must have finite coordinates")
        super().__init__(pts, mode)
        self._xs = np.array([p[0] for p in pts], dtype=np.float64)
        self._ys = np.array([p[1] for p in pts], dtype=np.float64)
        self._xs.setflags(write=False)
        self._ys.setflags(write=False)

    def pass_xy(self) -> tuple[np.ndarray, np.ndarray]:
        """One full forward pass; returns read-only coordinate views."""
        self.begin_pass()
        self._cursor = len(self._elements) - 1
        self.probes += len(self._elements)
        self.scans += 1
        return self._xs, self._ys

    def gather_xy(self, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Partial pass reading the given nondecreasing indices."""
        idx = np.asarray(idx, dtype=np.intp)
        if idx.size and self.mode is AccessMode.FORWARD:
            if np.any(np.diff(idx) < 0):
                self.violations += 1
                raise SequentialReadError("gather indices not nondecreasing")
        self.begin_pass()
        self.probes += int(idx.size)
        self.scans += 1
        return self._xs[idx], self._ys[idx]


@dataclass
class Lease:
    """A block of words checked out of a RegisterBank."""

    bank: "RegisterBank"
    words: int
    released: bool = False

    def release(self) -> None:
        if not self.released:
            self.bank._release(self.words)
            self.released = True

    def __enter__(self) -> "Lease":
        return self

    def __exit__(self, *exc) -> None:
        self.release()


class RegisterBank:
    """Fixed pool of word-sized mutable cells; peak usage is the space metric.

    A word holds one index, one real, or one small enum.  Procedures acquire a
    documented constant number of words at entry covering their locals, so the
    peak is a deterministic property of the call structure, never of n.
    """

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.in_use = 0
        self.peak = 0

    def acquire(self, words: int) -> Lease:
        if words < 0:
            raise ValueError("lease size must be nonnegative")
        if self.in_use + words > self.capacity:
            raise SpaceBudgetError(
                f"register budget exceeded: {self.in_use} + {words} > {self.capacity}"
            )
        self.in_use += words
        if self.in_use > self.peak:
            self.peak = self.in_use
        return Lease(self, words)

    def _release(self, words: int) -> None:
        self.in_use -= words
        assert self.in_use >= 0


@dataclass(frozen=True)
class Metrics:
    probes: int
    scans: int
    peak_registers: int

    def as_dict(self) -> dict:
        return {
            "probes": self.probes,
            "scans": self.scans,
            "peak_registers": self.peak_registers,
        }


def metrics(seq: MeteredSequence | None, bank: RegisterBank | None) -> Metrics:
    """Snapshot of the instrumentation counters."""
    return Metrics(
        probes=seq.probes if seq is not None else 0,
        scans=seq.scans if seq is not None else 0,
        peak_registers=bank.peak if bank is not None else 0,
    )
