"""Seedable simulation of noisy bit readings with exact query accounting.

Every reading of bit i returns ``hidden[i] XOR Bern(p)`` with independent
noise across readings, drawn from a splittable PCG64 stream so that a
(config, hidden, seed) triple fully determines the response sequence.  The
ledger counts every query, per bit and in total.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._backend import get_backend


class Variant(enum.Enum):
    """Whether the caller intends the expected-query or hard-capped algorithm."""

    VARIABLE_LENGTH = "variable-length"
    FIXED_LENGTH = "fixed-length"


class BudgetExhausted(RuntimeError):
    """Raised when a query would push the ledger past a hard budget."""


@dataclass(frozen=True)
class ProblemConfig:
    n: int
    k: int
    p: float
    delta: float
    seed: int
    variant: Variant = Variant.VARIABLE_LENGTH

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not isinstance(self.k, int) or not 1 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 1 <= k <= n={self.n}, got {self.k}")
        if not 0.0 < self.p < 0.5:
            raise ValueError(f"crossover probability must lie in (0, 1/2), got {self.p}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"target error must lie in (0, 1), got {self.delta}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")


def derive_seed(seed: int, *key: int) -> int:
    """Independent child seed for (trial, worker, ...) substreams."""
    state = np.random.SeedSequence(seed, spawn_key=tuple(key)).generate_state(2, np.uint64)
    return int(state[0]) | (int(state[1]) << 64)


@dataclass
class QueryLedger:
    """Per-bit and total query counters."""

    per_bit: np.ndarray
    total: int = 0

    @classmethod
    def zeros(cls, n: int) -> "QueryLedger":
        return cls(per_bit=np.zeros(n, dtype=np.int64), total=0)

    def merge(self, other: "QueryLedger") -> "QueryLedger":
        """Associative, commutative combination of two trial ledgers."""
        return QueryLedger(per_bit=self.per_bit + other.per_bit,
                           total=self.total + other.total)

    def check(self) -> None:
        assert self.total == int(self.per_bit.sum())


class NoisyBitOracle:
    """Answers bit queries through a crossover-probability-p channel.

    One oracle instance belongs to one logical thread; independent trials
    get independent oracles (see :func:`make_oracle` / :func:`derive_seed`).
    ``complement_view`` returns a response-negating view sharing this
    oracle's stream, ledger, and budget.
    """

    def __init__(self, hidden: np.ndarray, p: float, rng: np.random.Generator,
                 ledger: QueryLedger | None = None, *, backend: str = "auto",
                 _flip: bool = False, _budget_cell: list | None = None):
        self.hidden = hidden
        self.p = float(p)
        self.rng = rng
        self.ledger = ledger if ledger is not None else QueryLedger.zeros(len(hidden))
        self._kern = get_backend(backend)
        self._flip = _flip
        self._budget = _budget_cell if _budget_cell is not None else [None]

    @property
    def n(self) -> int:
        return len(self.hidden)

    @property
    def backend(self) -> str:
        return self._kern.BACKEND_NAME

    def complement_view(self) -> "NoisyBitOracle":
        view = NoisyBitOracle(self.hidden, self.p, self.rng, self.ledger,
                              _flip=not self._flip, _budget_cell=self._budget)
        view._kern = self._kern
        return view

    # -- budget -----------------------------------------------------------

    def set_budget(self, total_allowed: int | None) -> None:
        """Hard cap on queries from this point on (None removes it)."""
        self._budget[0] = None if total_allowed is None else int(total_allowed)

    @property
    def budget_remaining(self) -> int | None:
        return self._budget[0]

    def _allowance(self) -> int:
        rem = self._budget[0]
        return -1 if rem is None else rem

    def _consume(self, q: int) -> None:
        self.ledger.total += q
        if self._budget[0] is not None:
            self._budget[0] -= q

    # -- queries ----------------------------------------------------------

    def query(self, i: int) -> int:
        """One noisy reading of bit i."""
        self._check_index(i)
        if self._budget[0] is not None and self._budget[0] < 1:
            raise BudgetExhausted("query budget exhausted")
        resp = self._kern.bsc_read_sum(self.rng, self.p, self._bit(i), 1)
        self.ledger.per_bit[i] += 1
        self._consume(1)
        return int(resp)

    def read_majority_sum(self, i: int, r: int) -> int:
        """Number of 1-responses among r consecutive readings of bit i."""
        self._check_index(i)
        if r < 1:
            raise ValueError("reading count must be positive")
        if self._budget[0] is not None and self._budget[0] < r:
            raise BudgetExhausted("query budget cannot cover a full reading block")
        ones = self._kern.bsc_read_sum(self.rng, self.p, self._bit(i), r)
        self.ledger.per_bit[i] += r
        self._consume(r)
        return int(ones)

    def checkbit_walk(self, i: int, barrier: int) -> tuple[int, int]:
        """Sequential test on bit i; returns (estimate, queries)."""
        self._check_index(i)
        est, q, status = self._kern.checkbit_walk(
            self.rng, self.p, self._bit(i), barrier, 0, self._allowance())
        self.ledger.per_bit[i] += q
        self._consume(q)
        if status == self._kern.STATUS_BUDGET:
            raise BudgetExhausted("query budget exhausted mid-walk")
        return int(est), int(q)

    def safe_checkbit_walk(self, i: int, barrier: int, run_cap: int
                           ) -> tuple[int, int, int, int]:
        """Restart-capped test; returns (estimate, queries, restarts, max_run)."""
        self._check_index(i)
        est, q, restarts, max_run, status = self._kern.safe_checkbit_walk(
            self.rng, self.p, self._bit(i), barrier, run_cap, self._allowance())
        self.ledger.per_bit[i] += q
        self._consume(q)
        if status == self._kern.STATUS_BUDGET:
            raise BudgetExhausted("query budget exhausted mid-walk")
        return int(est), int(q), int(restarts), int(max_run)

    def checkbit_phase(self, barrier: int, *, safe: bool = False,
                       run_cap: int = 0) -> tuple[np.ndarray, bool]:
        """Per-bit test over all n bits in index order.

        Returns (estimates, completed); estimates[i] is -1 past the point
        where the budget ran out (completed False).
        """
        est_out = np.full(self.n, -1, dtype=np.int8)
        total, status, _done = self._kern.checkbit_phase(
            self.rng, self.p, self._hidden_i8(), int(self._flip), barrier,
            run_cap, int(safe), self._allowance(), self.ledger.per_bit, est_out)
        self._consume(int(total))
        return est_out, status != self._kern.STATUS_BUDGET

    # -- helpers ----------------------------------------------------------

    def _bit(self, i: int) -> int:
        return int(self.hidden[i]) ^ int(self._flip)

    def _hidden_i8(self) -> np.ndarray:
        if self.hidden.dtype != np.int8:
            self.hidden = self.hidden.astype(np.int8)
        return self.hidden

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range [0, {self.n})")


def make_oracle(config: ProblemConfig, hidden: Sequence[int] | np.ndarray,
                *, backend: str = "auto") -> NoisyBitOracle:
    """Oracle with a zeroed ledger; (config, hidden, seed) fixes its stream."""
    bits = np.asarray(hidden, dtype=np.int8)
    if bits.ndim != 1 or len(bits) != config.n:
        raise ValueError(f"hidden vector must have length n={config.n}, got {bits.shape}")
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("hidden vector must be 0/1-valued")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    return NoisyBitOracle(bits, config.p, rng, backend=backend)
