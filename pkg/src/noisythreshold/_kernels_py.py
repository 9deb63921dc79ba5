"""Pure-Python query kernels (reference implementation).

Every noisy reading consumes exactly one uniform double from the oracle's
generator, in query order.  The compiled backend in ``_kernels.pyx`` follows
the same consumption contract, so both backends produce bit-identical
response streams from the same generator state.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

STATUS_DECIDED = 0
STATUS_RUN_CAP = 1
STATUS_BUDGET = 2


def bsc_read_sum(gen: np.random.Generator, p: float, bit: int, r: int) -> int:
    """Number of 1-responses among ``r`` consecutive readings of one bit."""
    flips = int(np.count_nonzero(gen.random(r) < p))
    return r - flips if bit else flips


def checkbit_walk(gen, p, bit, barrier, run_cap, budget):
    """One sequential-test run on a single bit.

    The posterior is tracked as the integer net count of 1-responses; the
    run stops when it hits ``±barrier``.  ``barrier <= 0`` is the degenerate
    tolerance >= 1/2 case: a single reading decides.  ``run_cap > 0`` limits
    the queries of this run; ``budget >= 0`` limits them globally.

    Returns (estimate, queries, status); estimate is -1 unless decided.
    """
    if budget == 0:
        return -1, 0, STATUS_BUDGET
    if barrier <= 0:
        resp = bit ^ (gen.random() < p)
        return int(resp), 1, STATUS_DECIDED
    net = 0
    q = 0
    while -barrier < net < barrier:
        if run_cap > 0 and q >= run_cap:
            return -1, q, STATUS_RUN_CAP
        if budget >= 0 and q >= budget:
            return -1, q, STATUS_BUDGET
        resp = bit ^ (gen.random() < p)
        q += 1
        net += 1 if resp else -1
    return (1 if net >= barrier else 0), q, STATUS_DECIDED


def safe_checkbit_walk(gen, p, bit, barrier, run_cap, budget):
    """Restart-capped variant: rerun the walk whenever it hits ``run_cap``.

    Returns (estimate, queries, restarts, max_run_queries, status).
    """
    total = 0
    restarts = 0
    max_run = 0
    while True:
        rem = -1 if budget < 0 else budget - total
        est, q, status = checkbit_walk(gen, p, bit, barrier, run_cap, rem)
        total += q
        if q > max_run:
            max_run = q
        if status == STATUS_DECIDED:
            return est, total, restarts, max_run, STATUS_DECIDED
        if status == STATUS_BUDGET:
            return -1, total, restarts, max_run, STATUS_BUDGET
        restarts += 1


def checkbit_phase(gen, p, hidden, flipped, barrier, run_cap, safe, budget,
                   per_bit, est_out):
    """Run the per-bit test over every bit in index order.

    ``per_bit`` (int64) and ``est_out`` (int8, prefilled with -1) are updated
    in place.  Returns (total_queries, status, bits_completed); stops early
    only when the global budget runs out.
    """
    total = 0
    n = len(hidden)
    for i in range(n):
        bit = int(hidden[i]) ^ flipped
        rem = -1 if budget < 0 else budget - total
        if safe:
            est, q, _r, _m, status = safe_checkbit_walk(gen, p, bit, barrier,
                                                        run_cap, rem)
        else:
            est, q, status = checkbit_walk(gen, p, bit, barrier, 0, rem)
        per_bit[i] += q
        total += q
        if status == STATUS_BUDGET:
            return total, STATUS_BUDGET, i
        est_out[i] = est
    return total, STATUS_DECIDED, n
