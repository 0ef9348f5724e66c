"""Coverage Max rule by dynamic programming over voter subsets (FPT in n).

``h[S]`` is the cheapest cost of an item set whose approvers cover at least
the voters in ``S``.  Adding item ``a`` with approvers ``A`` relaxes
``h[S] <- h[S & ~A] + c(a)``.  Runtime O(m * 2^n) per table.
"""

from __future__ import annotations

import numpy as np

from apbudget.core import Scenario
from apbudget.errors import ResourceCapError
from apbudget.solvers.result import DEFAULT_CONFIG, SolveResult, SolverConfig

_STORE_LIMIT = 1 << 24  # table cells kept in memory before switching to recomputation


def _prefix_tables(costs, masks, n, inf, upto, dtype=np.int64):
    """Yield h after 0, 1, ..., upto items."""
    idx = np.arange(1 << n, dtype=np.int64)
    h = np.full(1 << n, inf, dtype=dtype)
    h[0] = 0
    yield h
    for c, a_mask in zip(costs[:upto], masks[:upto]):
        h = np.minimum(h, h[idx & ~a_mask] + c)
        np.minimum(h, inf, out=h)
        yield h


def _last(tables):
    for h in tables:
        pass
    return h


def solve_max_cover_fpt_voters(s: Scenario, config: SolverConfig = DEFAULT_CONFIG) -> SolveResult:
    if s.n > config.fpt_cap:
        raise ResourceCapError(f"voter-subset DP limited to {config.fpt_cap} voters, scenario has {s.n}")
    eligible = [a for a in range(s.m) if s.costs[a] <= s.limit and s.approver_masks[a]]
    if not eligible:
        return SolveResult.from_mask(s, 0, 0)
    costs = [s.costs[a] for a in eligible]
    masks = [s.approver_masks[a] for a in eligible]
    inf = min(s.limit, sum(costs)) + 1
    dtype = np.int64 if inf < 2**62 else object
    n = s.n
    popcount = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)

    store = (len(eligible) + 1) << n <= _STORE_LIMIT
    if store:
        tables = list(_prefix_tables(costs, masks, n, inf, len(eligible), dtype))
        full = tables[-1]
    else:
        full = _last(_prefix_tables(costs, masks, n, inf, len(eligible), dtype))

    affordable = full < inf
    best = int(popcount[affordable].max())
    target_cost = int(full[affordable & (popcount == best)].min())

    # walk from the highest id down, dropping items whenever a completion exists without them
    chosen_mask = 0
    union = 0
    spent = 0
    for j in range(len(eligible) - 1, -1, -1):
        h = tables[j] if store else _last(_prefix_tables(costs, masks, n, inf, j, dtype))
        need = best - union.bit_count()
        free = (np.arange(1 << n, dtype=np.int64) & union) == 0
        ok = free & (popcount >= need)
        if h[ok].min() <= target_cost - spent:
            continue
        chosen_mask |= 1 << eligible[j]
        union |= masks[j]
        spent += costs[j]
    return SolveResult.from_mask(s, chosen_mask, best)
