"""Knapsack-style dynamic programs for the count and cost Max rules, and the FPTAS.

All tables are kept per item prefix so that the canonical optimum can be
recovered: walking from the highest item id down, an item is left out
whenever the remaining target is still reachable without it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from apbudget.core import Scenario
from apbudget.errors import ResourceCapError
from apbudget.satisfaction import BUILTIN, SatisfactionFnId
from apbudget.solvers.result import DEFAULT_CONFIG, SolveResult, SolverConfig

_INT64_SAFE = 2**62


def _min_cost_by_value(costs: Sequence[int], values: Sequence[int], width: int, limit: int):
    """Return (value, cost, chosen positions) of the canonical optimum.

    ``table[i][z]`` is the cheapest cost reaching total value exactly ``z``
    with the first ``i`` entries, or ``inf`` when impossible.
    """
    inf = max(sum(costs), limit) + 1
    dtype = object if inf >= _INT64_SAFE else np.int64
    table = np.full((len(costs) + 1, width + 1), inf, dtype=dtype)
    table[0, 0] = 0
    for i, (c, z) in enumerate(zip(costs, values), start=1):
        prev = table[i - 1]
        row = prev.copy()
        if z <= width:
            shifted = prev[: width + 1 - z] + c
            row[z:] = np.minimum(row[z:], shifted)
        table[i] = np.minimum(row, inf)
    last = table[len(costs)]
    reachable = np.flatnonzero(last <= limit)
    z = int(reachable.max())
    cost = int(last[z])
    chosen = []
    for i in range(len(costs), 0, -1):
        if table[i - 1, z] == cost:
            continue
        chosen.append(i - 1)
        z -= values[i - 1]
        cost -= costs[i - 1]
    return int(reachable.max()), chosen


def solve_max_count_dp(s: Scenario) -> SolveResult:
    """Exact Max rule for the count satisfaction function.

    Runs over total satisfaction 0..n*m; each item contributes its number of
    approvers.  Polynomial because that range is.
    """
    width = s.n * s.m
    value, chosen = _min_cost_by_value(s.costs, s.support, width, s.limit)
    mask = sum(1 << a for a in chosen)
    return SolveResult.from_mask(s, mask, value)


def solve_max_cost_dp(s: Scenario, config: SolverConfig = DEFAULT_CONFIG) -> SolveResult:
    """Exact Max rule for the cost satisfaction function, pseudopolynomial in the limit.

    ``table[i][w]`` is the best value spending exactly ``w`` with the first
    ``i`` items (-1 when impossible).
    """
    if s.limit > config.dp_cap:
        raise ResourceCapError(
            f"cost DP limited to budget limit {config.dp_cap}, scenario has {s.limit}; "
            "use the FPTAS (--epsilon) instead"
        )
    costs = s.costs
    values = [c * k for c, k in zip(costs, s.support)]
    width = min(s.limit, sum(costs))
    dtype = object if sum(values) >= _INT64_SAFE else np.int64
    table = np.full((s.m + 1, width + 1), -1, dtype=dtype)
    table[0, 0] = 0
    for i, (c, v) in enumerate(zip(costs, values), start=1):
        prev = table[i - 1]
        row = prev.copy()
        if c <= width:
            src = prev[: width + 1 - c]
            cand = np.where(src >= 0, src + v, -1)
            row[c:] = np.maximum(row[c:], cand)
        table[i] = row
    last = table[s.m]
    best = int(last.max())
    w = int(np.flatnonzero(last == best).min())
    mask = 0
    z = best
    for i in range(s.m, 0, -1):
        if table[i - 1, w] == z:
            continue
        mask |= 1 << (i - 1)
        w -= costs[i - 1]
        z -= values[i - 1]
    return SolveResult.from_mask(s, mask, best)


def solve_max_cost_fptas(s: Scenario, epsilon) -> SolveResult:
    """(1 - epsilon)-approximation for the cost Max rule.

    Each item becomes a knapsack element with weight c(a) and value
    c(a) * #approvers; values are scaled down by ``epsilon * vmax / k`` and
    the scaled instance is solved exactly by the min-cost-per-value DP.
    """
    eps = Fraction(epsilon) if not isinstance(epsilon, str) else Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    eligible = [a for a in range(s.m) if s.costs[a] <= s.limit and s.support[a] > 0]
    if not eligible:
        return SolveResult.from_mask(s, 0, 0)
    values = [s.costs[a] * s.support[a] for a in eligible]
    vmax = max(values)
    k = len(eligible)
    # scaled = floor(v / (eps * vmax / k))
    scaled = [int(Fraction(v * k) / (eps * vmax)) for v in values]
    costs = [s.costs[a] for a in eligible]
    _, chosen = _min_cost_by_value(costs, scaled, sum(scaled), s.limit)
    mask = sum(1 << eligible[i] for i in chosen)
    return SolveResult.from_mask(s, mask, BUILTIN[SatisfactionFnId.COST].total(s, mask))
