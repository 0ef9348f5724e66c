"""Greedy and proportional-greedy rules.

Both add one affordable item per iteration until nothing fits (the output is
a maximal budget).  Ties go to the lowest item id.  Proportional greedy
compares gain/cost ratios by integer cross-multiplication.
"""

from __future__ import annotations

from apbudget.core import Scenario
from apbudget.errors import UnsupportedPairingError
from apbudget.satisfaction import SatisfactionFunction, resolve
from apbudget.solvers.result import SolveResult


def _check_monotone(f: SatisfactionFunction) -> None:
    if not f.superset_monotone:
        raise UnsupportedPairingError(
            f"greedy rules need a superset-monotone satisfaction function; {f.name!r} is not"
        )


def _run(s: Scenario, fn, proportional: bool, positive_gain_only: bool) -> SolveResult:
    f = resolve(fn)
    _check_monotone(f)
    costs = s.costs
    mask = 0
    spent = 0
    trace = []
    remaining = [a for a in range(s.m) if costs[a] <= s.limit]
    while True:
        residual = s.limit - spent
        candidates = [a for a in remaining if costs[a] <= residual]
        if not candidates:
            break
        gains = f.marginals(s, mask, candidates)
        best, best_gain = None, None
        for a, g in zip(candidates, gains):
            if positive_gain_only and g <= 0:
                continue
            if best is None:
                best, best_gain = a, g
            elif proportional:
                # g / c(a) > best_gain / c(best); candidates ascend, so ties keep the lower id
                if g * costs[best] > best_gain * costs[a]:
                    best, best_gain = a, g
            elif g > best_gain:
                best, best_gain = a, g
        if best is None:
            break
        mask |= 1 << best
        spent += costs[best]
        trace.append((best, best_gain))
        remaining.remove(best)
    return SolveResult.from_mask(s, mask, f.total(s, mask), trace)


def solve_greedy(s: Scenario, fn, positive_gain_only: bool = False) -> SolveResult:
    """Repeatedly add the affordable item with the largest gain in total satisfaction.

    With ``positive_gain_only`` the loop also stops once every affordable item
    has zero gain, so unapproved items are never funded.
    """
    return _run(s, fn, proportional=False, positive_gain_only=positive_gain_only)


def solve_prop_greedy(s: Scenario, fn, positive_gain_only: bool = False) -> SolveResult:
    """Like :func:`solve_greedy` but ranks items by gain divided by cost."""
    return _run(s, fn, proportional=True, positive_gain_only=positive_gain_only)
