"""Closed-form rates, budgets, and repetition counts.

Natural logarithms throughout.  The central quantity is the per-query
information rate D_KL(Bern(p) || Bern(1-p)) = (1-2p) ln((1-p)/p); dividing
n ln(k/delta) by it gives the optimal expected query count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _check_p(p: float) -> None:
    if not 0.0 < p < 0.5:
        raise ValueError(f"crossover probability must lie in (0, 1/2), got {p}")


def kl_bern_flip(p: float) -> float:
    """(1-2p) ln((1-p)/p), in nats."""
    _check_p(p)
    return (1.0 - 2.0 * p) * math.log((1.0 - p) / p)


def llr_barrier(delta: float, p: float) -> int:
    """Net 1-response count at which the posterior leaves (delta, 1-delta).

    Each reading moves the log-likelihood ratio by exactly +-ln((1-p)/p),
    so the stopping rule is an integer barrier.  Zero for delta >= 1/2
    (the loop body never runs; callers must treat the test as degenerate).
    """
    _check_p(p)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {delta}")
    if delta >= 0.5:
        return 0
    return math.ceil(math.log((1.0 - delta) / delta) / math.log((1.0 - p) / p))


def checkbit_budget(delta: float, p: float) -> float:
    """Expected-query bound for estimating one bit to tolerance delta."""
    return llr_barrier(delta, p) / (1.0 - 2.0 * p)


def safe_run_cap(delta: float, p: float) -> float:
    """m ln m for m = checkbit_budget(delta, p): the per-run restart cut-off."""
    m = checkbit_budget(delta, p)
    if m <= 1.0:
        return 0.0
    return m * math.log(m)


def optimal_rate(n: int, k: int, delta: float, p: float) -> float:
    """n ln(k/delta) / kl_bern_flip(p): the optimal expected query count."""
    _check_p(p)
    if n < 1 or not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"target error must lie in (0, 1), got {delta}")
    return n * math.log(k / delta) / kl_bern_flip(p)


def fixed_length_cap(n: int, k: int, delta: float, p: float) -> float:
    """Hard total-query cap for the fixed-length threshold algorithm.

    With m' the per-bit budget at tolerance delta/k, the cap is
    n m'/(1 - 1/ln m') + n sqrt(ln(k/delta)).  Requires m' > e, else the
    restart-overhead correction degenerates.
    """
    _check_p(p)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"target error must lie in (0, 1), got {delta}")
    m_prime = math.ceil(
        math.log((k - delta) / delta) / math.log((1.0 - p) / p)
    ) / (1.0 - 2.0 * p)
    if m_prime <= math.e:
        raise ValueError(
            f"per-bit budget m'={m_prime:.4g} <= e: cap formula degenerates "
            "(delta too large for this p, k)")
    return n * m_prime / (1.0 - 1.0 / math.log(m_prime)) + n * math.sqrt(
        math.log(k / delta))


def majority_readings(delta_c: float, p: float) -> int:
    """Smallest odd r with ceil(ln(2/delta_c) / (2 (1/2-p)^2)) <= r.

    A majority vote over r i.i.d. readings then errs with probability at
    most delta_c (Hoeffding bound; verified against the exact binomial tail
    in the test suite).
    """
    _check_p(p)
    if not 0.0 < delta_c < 1.0:
        raise ValueError(f"per-comparison tolerance must lie in (0, 1), got {delta_c}")
    r = math.ceil(math.log(2.0 / delta_c) / (2.0 * (0.5 - p) ** 2))
    if r < 1:
        r = 1
    return r if r % 2 == 1 else r + 1


@dataclass(frozen=True)
class RateBreakdown:
    """Every budget relevant to one (n, k, p, delta) problem instance."""

    kl: float
    optimal_expected_queries: float
    checkbit_budget_m: float
    fixed_cap: float
    coefficient_of_nlogn: float


def rate_breakdown(n: int, k: int, delta: float, p: float,
                   per_bit_tolerance: str = "delta_over_k") -> RateBreakdown:
    """Bundle of the closed-form quantities for one configuration.

    ``per_bit_tolerance`` selects whether checkbit_budget_m is evaluated at
    delta/k (the first-phase tolerance) or at delta itself.
    """
    if per_bit_tolerance == "delta_over_k":
        tol = delta / k
    elif per_bit_tolerance == "delta":
        tol = delta
    else:
        raise ValueError(f"unknown per-bit tolerance mode {per_bit_tolerance!r}")
    rate = optimal_rate(n, k, delta, p)
    coeff = rate / (n * math.log(n)) if n > 1 else math.nan
    return RateBreakdown(
        kl=kl_bern_flip(p),
        optimal_expected_queries=rate,
        checkbit_budget_m=checkbit_budget(tol, p),
        fixed_cap=fixed_length_cap(n, k, delta, p),
        coefficient_of_nlogn=coeff,
    )
