"""Exhaustive search over all 2^m budgets.

Subset tables are built by doubling: after processing item i, index ``k``
holds the quantity for the budget whose bitmask is ``k``.  The canonical
winner is then the feasible index with maximal value, minimal cost, and
minimal index.
"""

from __future__ import annotations

import numpy as np

from apbudget.core import Scenario
from apbudget.errors import ResourceCapError
from apbudget.satisfaction import (
    CostApproved,
    CountApproved,
    CoverIndicator,
    MinApprovedCost,
    resolve,
)
from apbudget.solvers.result import DEFAULT_CONFIG, SolveResult, SolverConfig

_INT64_SAFE = 2**62


def _doubling(per_item, dtype) -> np.ndarray:
    table = np.zeros(1, dtype=dtype)
    for v in per_item:
        table = np.concatenate([table, table + v])
    return table


def _cover_counts(s: Scenario) -> np.ndarray:
    words = max(1, (s.n + 63) // 64)
    counts = np.zeros(1 << s.m, dtype=np.int64)
    for w in range(words):
        covered = np.zeros(1, dtype=np.uint64)
        for mask in s.approver_masks:
            part = np.uint64((mask >> (64 * w)) & (2**64 - 1))
            covered = np.concatenate([covered, covered | part])
        counts += np.bitwise_count(covered).astype(np.int64)
    return counts


def _min_cost_values(s: Scenario, dtype) -> np.ndarray:
    total = np.zeros(1 << s.m, dtype=dtype)
    big = sum(s.costs) + 1
    for vmask in s.voter_masks:
        if not vmask:
            continue
        best = np.full(1, big, dtype=dtype)
        for a, c in enumerate(s.costs):
            if vmask >> a & 1:
                best = np.concatenate([best, np.minimum(best, c)])
            else:
                best = np.concatenate([best, best])
        total += np.where(best == big, 0, best)
    return total


def _values(s: Scenario, f, dtype) -> np.ndarray:
    if isinstance(f, CountApproved):
        return _doubling(s.support, dtype)
    if isinstance(f, CostApproved):
        return _doubling([c * k for c, k in zip(s.costs, s.support)], dtype)
    if isinstance(f, CoverIndicator):
        return _cover_counts(s)
    if isinstance(f, MinApprovedCost):
        return _min_cost_values(s, dtype)
    return np.array([f.total(s, mask) for mask in range(1 << s.m)], dtype=object)


def solve_brute_force(s: Scenario, fn, config: SolverConfig = DEFAULT_CONFIG) -> SolveResult:
    if s.m > config.brute_cap:
        raise ResourceCapError(f"brute force limited to {config.brute_cap} items, scenario has {s.m}")
    f = resolve(fn)
    big = sum(s.costs) * max(1, s.n) >= _INT64_SAFE
    dtype = object if big else np.int64
    costs = _doubling(s.costs, dtype)
    values = _values(s, f, dtype)
    feasible = np.flatnonzero(costs <= s.limit)
    v = values[feasible]
    best = v.max()
    cand = feasible[v == best]
    c = costs[cand]
    winner = int(cand[c == c.min()].min())
    return SolveResult.from_mask(s, winner, int(best))
