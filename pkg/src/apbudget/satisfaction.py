"""Satisfaction functions f(A_v, B) and the contract for adding new ones.

A satisfaction function only sees the voter's approval set and the funded
part of it, ``A_v & B``.  Implementations must be pure and must declare
whether they are superset-monotone; greedy solvers refuse functions that are
not.  Budgets and approval sets are handled as integer bitmasks internally.
"""

from __future__ import annotations

import enum
from typing import Callable, Iterable, Sequence

from apbudget.core import ApprovalSet, Budget, Scenario


class SatisfactionFnId(enum.Enum):
    COUNT = "count"  # number of funded approved items
    COVER = "cover"  # 1 if anything approved is funded
    COST = "cost"  # total cost of funded approved items
    MIN_COST = "mincost"  # cost of the cheapest funded approved item, 0 if none

    @classmethod
    def from_name(cls, name: str) -> "SatisfactionFnId":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown satisfaction function {name!r}; choose from {[m.value for m in cls]}")


def _ids(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class SatisfactionFunction:
    """Base class. Subclasses implement :meth:`voter_value`."""

    name = "custom"
    superset_monotone = False

    def voter_value(self, s: Scenario, funded_mask: int, approved_mask: int) -> int:
        raise NotImplementedError

    def total(self, s: Scenario, budget_mask: int) -> int:
        return sum(self.voter_value(s, vm & budget_mask, vm) for vm in s.voter_masks)

    def marginals(self, s: Scenario, budget_mask: int, candidates: Sequence[int]) -> list[int]:
        """Gain in total satisfaction from adding each candidate to the budget."""
        base = self.total(s, budget_mask)
        return [self.total(s, budget_mask | (1 << a)) - base for a in candidates]

    def __repr__(self) -> str:
        return f"<satisfaction {self.name}>"


class CountApproved(SatisfactionFunction):
    name = "count"
    superset_monotone = True

    def voter_value(self, s, funded_mask, approved_mask):
        return funded_mask.bit_count()

    def total(self, s, budget_mask):
        return sum(s.support[a] for a in _ids(budget_mask))

    def marginals(self, s, budget_mask, candidates):
        return [0 if budget_mask >> a & 1 else s.support[a] for a in candidates]


class CoverIndicator(SatisfactionFunction):
    name = "cover"
    superset_monotone = True

    def voter_value(self, s, funded_mask, approved_mask):
        return 1 if funded_mask else 0

    def covered(self, s: Scenario, budget_mask: int) -> int:
        covered = 0
        for a in _ids(budget_mask):
            covered |= s.approver_masks[a]
        return covered

    def total(self, s, budget_mask):
        return self.covered(s, budget_mask).bit_count()

    def marginals(self, s, budget_mask, candidates):
        uncovered = ~self.covered(s, budget_mask)
        return [(s.approver_masks[a] & uncovered).bit_count() for a in candidates]


class CostApproved(SatisfactionFunction):
    name = "cost"
    superset_monotone = True

    def voter_value(self, s, funded_mask, approved_mask):
        return sum(s.costs[a] for a in _ids(funded_mask))

    def total(self, s, budget_mask):
        return sum(s.costs[a] * s.support[a] for a in _ids(budget_mask))

    def marginals(self, s, budget_mask, candidates):
        return [0 if budget_mask >> a & 1 else s.costs[a] * s.support[a] for a in candidates]


class MinApprovedCost(SatisfactionFunction):
    """Cost of the cheapest funded approved item; not superset-monotone."""

    name = "mincost"
    superset_monotone = False

    def voter_value(self, s, funded_mask, approved_mask):
        if not funded_mask:
            return 0
        return min(s.costs[a] for a in _ids(funded_mask))


class CallableSatisfaction(SatisfactionFunction):
    """Wraps ``f(approved_ids, funded_ids, costs) -> int`` as a satisfaction function."""

    def __init__(self, name: str, f: Callable[[frozenset, frozenset, tuple], int], superset_monotone: bool):
        self.name = name
        self._f = f
        self.superset_monotone = superset_monotone

    def voter_value(self, s, funded_mask, approved_mask):
        value = self._f(frozenset(_ids(approved_mask)), frozenset(_ids(funded_mask)), s.costs)
        if value < 0:
            raise ValueError(f"satisfaction function {self.name} returned negative value {value}")
        return int(value)


BUILTIN: dict[SatisfactionFnId, SatisfactionFunction] = {
    SatisfactionFnId.COUNT: CountApproved(),
    SatisfactionFnId.COVER: CoverIndicator(),
    SatisfactionFnId.COST: CostApproved(),
    SatisfactionFnId.MIN_COST: MinApprovedCost(),
}


def resolve(fn: "SatisfactionFnId | SatisfactionFunction | str") -> SatisfactionFunction:
    if isinstance(fn, SatisfactionFunction):
        return fn
    if isinstance(fn, str):
        fn = SatisfactionFnId.from_name(fn)
    return BUILTIN[fn]


def evaluate(fn, approved: ApprovalSet, b: Budget, s: Scenario) -> int:
    """Satisfaction of one voter from budget ``b``."""
    f = resolve(fn)
    approved_mask = sum(1 << a for a in approved.approved)
    return f.voter_value(s, approved_mask & b.mask, approved_mask)


def total_satisfaction(fn, s: Scenario, b: Budget) -> int:
    return resolve(fn).total(s, b.mask)
