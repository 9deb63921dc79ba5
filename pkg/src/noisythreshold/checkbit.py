"""Sequential Bayesian estimation of a single bit, and its capped variant.

The posterior that the bit is 1 starts at 1/2 and is Bayes-updated after
each reading; querying stops once it leaves (delta, 1-delta).  Internally
the state is the integer net count of 1-responses: the log-odds move by
exactly +-ln((1-p)/p) per reading, so the stopping rule is the integer
barrier from :func:`noisythreshold.bounds.llr_barrier` and no floating
posterior is ever accumulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import llr_barrier, safe_run_cap
from .oracle import NoisyBitOracle


class DegenerateBudgetError(ValueError):
    """Restart cap m ln m too small for any run to finish."""


@dataclass(frozen=True)
class CheckBitOutcome:
    estimate: int
    queries_used: int
    restarts: int = 0
    degenerate: bool = False
    max_run_queries: int | None = None


def posterior_from_net(net: int, p: float) -> float:
    """Exact Bayes posterior of {bit=1} after a net count of 1-responses."""
    step = math.log((1.0 - p) / p)
    return 1.0 / (1.0 + math.exp(-net * step))


def _validate(oracle: NoisyBitOracle, delta: float, p: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {delta}")
    if not 0.0 < p < 0.5:
        raise ValueError(f"crossover probability must lie in (0, 1/2), got {p}")
    if not math.isclose(p, oracle.p, rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"p={p} does not match the oracle channel p={oracle.p}")


def check_bit(oracle: NoisyBitOracle, i: int, delta: float, p: float) -> CheckBitOutcome:
    """Estimate bit i with error probability at most delta.

    For delta >= 1/2 the stopping region already contains the prior, so a
    single reading is returned and the outcome is flagged degenerate.
    """
    _validate(oracle, delta, p)
    barrier = llr_barrier(delta, p)
    est, q = oracle.checkbit_walk(i, barrier)
    return CheckBitOutcome(estimate=est, queries_used=q, degenerate=barrier == 0)


def safe_check_bit(oracle: NoisyBitOracle, i: int, delta: float, p: float) -> CheckBitOutcome:
    """check_bit with a per-run cut-off: any run about to make its
    ceil(m ln m)-th query is aborted and restarted from a fresh prior.

    m is the expected-query budget at this tolerance; the cap bounds every
    run's query count while inflating the error and the mean only by a
    1/ln m factor.
    """
    _validate(oracle, delta, p)
    cap = safe_run_cap(delta, p)
    if cap <= 1.0:
        raise DegenerateBudgetError(
            f"restart cap m ln m = {cap:.4g} <= 1 at delta={delta}, p={p}")
    run_cap = math.ceil(cap) - 1
    barrier = llr_barrier(delta, p)
    est, q, restarts, max_run = oracle.safe_checkbit_walk(i, barrier, run_cap)
    return CheckBitOutcome(estimate=est, queries_used=q, restarts=restarts,
                           max_run_queries=max_run)
