"""Tournament max-heap machinery over noisy bit readings.

Comparisons read both operands a fixed (odd) number of times and majority-
vote each side; the tournament tightens the per-level tolerance with depth
so the root is the estimated maximum.  Extraction removes the root's leaf
and re-runs one comparison per level along that leaf's path.  Composed,
they compute the k-th largest bit and hence the threshold function on a
small survivor set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bounds import majority_readings
from .checkbit import check_bit
from .oracle import NoisyBitOracle


def level_tolerance(delta: float, i: int) -> float:
    """Comparison tolerance at tournament level i >= 1: delta^(2(2i-1))."""
    return delta ** (2 * (2 * i - 1))


def path_tolerance_total(m: int, delta: float) -> float:
    """Sum of per-level tolerances along one root path of an m-leaf heap.

    This is the union bound governing the root's correctness: one comparison
    per level can disturb the eventual maximum.
    """
    levels = math.ceil(math.log2(m)) if m > 1 else 0
    return sum(level_tolerance(delta, i) for i in range(1, levels + 1))


def _compare(oracle: NoisyBitOracle, i: int, j: int, delta_c: float, p: float
             ) -> tuple[int, int, int]:
    """Majority-vote both bits; returns (winner, est_i, est_j)."""
    r = majority_readings(delta_c / 2.0, p)
    est_i = int(oracle.read_majority_sum(i, r) * 2 > r)
    est_j = int(oracle.read_majority_sum(j, r) * 2 > r)
    if est_i != est_j:
        winner = i if est_i > est_j else j
    else:
        winner = min(i, j)
    return winner, est_i, est_j


def noisy_compare_readings(oracle: NoisyBitOracle, i: int, j: int,
                           delta_c: float, p: float) -> int:
    """Index of the estimated larger bit; errs w.p. <= delta_c when they differ.

    Ties between equal estimates go to the lower index, which keeps repeated
    runs on a fixed stream deterministic.
    """
    if not 0.0 < delta_c < 1.0:
        raise ValueError(f"comparison tolerance must lie in (0, 1), got {delta_c}")
    winner, _, _ = _compare(oracle, i, j, delta_c, p)
    return winner


@dataclass
class HeapLevels:
    """Tournament tree; levels[0] holds the input indices, the top the root.

    Entries above the leaves are winner indices, or None once a subtree is
    exhausted by extraction.  ``estimates`` remembers each index's latest
    majority estimate, which is how the extracted maximum's bit value is
    read without extra queries.
    """

    levels: list[list[int | None]]
    delta: float
    estimates: dict[int, int] = field(default_factory=dict)
    dead: set[int] = field(default_factory=set)

    @property
    def size(self) -> int:
        return len(self.levels[0])

    @property
    def alive_count(self) -> int:
        return self.size - len(self.dead)

    def root(self) -> int | None:
        return self.levels[-1][0]

    def _leaf_slot(self, idx: int) -> int:
        return self.levels[0].index(idx)

    def check_shape(self) -> None:
        """Level sizes halve (ceiling) and every entry matches a child."""
        for lvl in range(1, len(self.levels)):
            below, here = self.levels[lvl - 1], self.levels[lvl]
            assert len(here) == (len(below) + 1) // 2
            for pos, entry in enumerate(here):
                kids = below[2 * pos:2 * pos + 2]
                alive_kids = [e for e in kids if e is not None and e not in self.dead]
                if entry is None:
                    assert not alive_kids
                else:
                    assert entry in alive_kids
        assert len(self.levels[-1]) == 1


def construct_max_heap(oracle: NoisyBitOracle, indices: list[int],
                       delta: float, p: float) -> HeapLevels:
    """Bottom-up tournament; level i uses tolerance delta^(2(2i-1)).

    Odd elements carry upward unqueried.  A single element is a one-level
    heap built with zero queries.
    """
    if len(indices) == 0:
        raise ValueError("cannot build a heap from an empty index sequence")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {delta}")
    heap = HeapLevels(levels=[list(indices)], delta=delta)
    y = list(indices)
    r = len(y)
    for i in range(1, math.ceil(math.log2(len(indices))) + 1):
        tol = level_tolerance(delta, i)
        winners: list[int | None] = []
        for j in range(r // 2):
            w, ei, ej = _compare(oracle, y[2 * j], y[2 * j + 1], tol, p)
            heap.estimates[y[2 * j]] = ei
            heap.estimates[y[2 * j + 1]] = ej
            winners.append(w)
        if r % 2 == 1:
            winners.append(y[r - 1])
        heap.levels.append(winners)
        y = winners
        r = len(y)
    return heap


def noisy_extract_max(heap: HeapLevels, oracle: NoisyBitOracle,
                      delta_e: float, p: float) -> int:
    """Remove the current root and repair its leaf-to-root path.

    One comparison per level at tolerance delta_e, at most ceil(log2 size);
    promotions against exhausted slots are free.
    """
    root = heap.root()
    if root is None:
        raise ValueError("heap is empty")
    slot = heap._leaf_slot(root)
    heap.dead.add(root)
    for lvl in range(1, len(heap.levels)):
        pos = slot >> lvl
        below = heap.levels[lvl - 1]
        kids = below[2 * pos:2 * pos + 2]
        alive = [e for e in kids if e is not None and e not in heap.dead]
        if len(alive) == 2:
            w, ei, ej = _compare(oracle, alive[0], alive[1], delta_e, p)
            heap.estimates[alive[0]] = ei
            heap.estimates[alive[1]] = ej
            heap.levels[lvl][pos] = w
        elif len(alive) == 1:
            heap.levels[lvl][pos] = alive[0]
        else:
            heap.levels[lvl][pos] = None
    return root


def max_heap_threshold(oracle: NoisyBitOracle, indices: list[int], k: int,
                       delta: float, p: float) -> int:
    """1 iff at least k of the listed bits are (estimated to be) 1.

    For k >= sqrt(m) the k-th largest bit is determined by the count of
    ones, so each listed bit is estimated to tolerance delta/(2m) and
    counted exactly.  Otherwise a tournament at tolerance delta/(2k) is
    built and the max extracted k times at per-call tolerance
    delta/(2k ln m); the answer is the k-th extract's recorded bit value.
    """
    m = len(indices)
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= {m}, got k={k}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {delta}")
    if k * k >= m:
        ones = sum(check_bit(oracle, i, delta / (2.0 * m), p).estimate
                   for i in indices)
        return int(ones >= k)
    heap = construct_max_heap(oracle, indices, delta / (2.0 * k), p)
    delta_e = delta / (2.0 * k * math.log(m))
    last = -1
    for _ in range(k):
        last = noisy_extract_max(heap, oracle, delta_e, p)
    return heap.estimates[last]
