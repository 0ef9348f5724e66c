"""Budgeting scenarios, budgets, rule identifiers and the scenario text format.

Tie-breaking: among budgets of equal rule value the canonical winner is the
cheaper one, and among equally cheap ones the one whose member ids, sorted in
descending order, are lexicographically smallest.  That is the same as the
smallest bitmask ``sum(2**id)``, which is how the solvers compare budgets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from apbudget.errors import MalformedBudgetError, ScenarioParseError

MAX_AMOUNT = 2**64 - 1


@dataclass(frozen=True)
class Item:
    id: int
    cost: int

    def __post_init__(self):
        if isinstance(self.cost, bool) or not isinstance(self.cost, int):
            raise TypeError(f"item cost must be an int, got {self.cost!r}")
        if not 1 <= self.cost <= MAX_AMOUNT:
            raise ValueError(f"item {self.id}: cost must be in [1, 2^64-1], got {self.cost}")


@dataclass(frozen=True)
class ApprovalSet:
    voter_id: int
    approved: frozenset[int] = frozenset()


@dataclass(frozen=True)
class Scenario:
    """Items with integer costs, voters' approval sets and a budget limit."""

    items: tuple[Item, ...]
    voters: tuple[ApprovalSet, ...]
    limit: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "voters", tuple(self.voters))
        for idx, item in enumerate(self.items):
            if item.id != idx:
                raise ValueError(f"item ids must be 0..m-1 in order; position {idx} has id {item.id}")
        m = len(self.items)
        for idx, voter in enumerate(self.voters):
            if voter.voter_id != idx:
                raise ValueError(f"voter ids must be 0..n-1 in order; position {idx} has id {voter.voter_id}")
            for a in voter.approved:
                if not 0 <= a < m:
                    raise ValueError(f"voter {idx} approves unknown item {a}")
        if isinstance(self.limit, bool) or not isinstance(self.limit, int):
            raise TypeError("limit must be an int")
        if not 0 <= self.limit <= MAX_AMOUNT:
            raise ValueError(f"limit must be in [0, 2^64-1], got {self.limit}")

    @classmethod
    def build(cls, costs: Sequence[int], approvals: Iterable[Iterable[int]], limit: int) -> "Scenario":
        items = tuple(Item(i, int(c)) for i, c in enumerate(costs))
        voters = tuple(ApprovalSet(v, frozenset(int(a) for a in app)) for v, app in enumerate(approvals))
        return cls(items, voters, int(limit))

    @property
    def m(self) -> int:
        return len(self.items)

    @property
    def n(self) -> int:
        return len(self.voters)

    @cached_property
    def costs(self) -> tuple[int, ...]:
        return tuple(item.cost for item in self.items)

    @cached_property
    def voter_masks(self) -> tuple[int, ...]:
        """Per voter, the approved items as a bitmask over item ids."""
        return tuple(sum(1 << a for a in v.approved) for v in self.voters)

    @cached_property
    def approver_masks(self) -> tuple[int, ...]:
        """Per item, its approvers as a bitmask over voter ids."""
        masks = [0] * self.m
        for v in self.voters:
            for a in v.approved:
                masks[a] |= 1 << v.voter_id
        return tuple(masks)

    @cached_property
    def support(self) -> tuple[int, ...]:
        """Number of approvers of each item."""
        return tuple(mask.bit_count() for mask in self.approver_masks)

    def approval_lists(self) -> list[list[int]]:
        return [sorted(v.approved) for v in self.voters]

    def with_limit(self, limit: int) -> "Scenario":
        return Scenario(self.items, self.voters, limit)

    def with_costs(self, costs: Sequence[int]) -> "Scenario":
        return Scenario(tuple(Item(i, int(c)) for i, c in enumerate(costs)), self.voters, self.limit)


@dataclass(frozen=True)
class Budget:
    members: frozenset[int]
    total_cost: int

    @classmethod
    def of(cls, s: Scenario, ids: Iterable[int]) -> "Budget":
        members = frozenset(ids)
        for a in members:
            if not (isinstance(a, int) and 0 <= a < s.m):
                raise MalformedBudgetError(f"unknown item id {a!r}")
        return cls(members, sum(s.costs[a] for a in members))

    @classmethod
    def from_mask(cls, s: Scenario, mask: int) -> "Budget":
        return cls.of(s, (i for i in range(s.m) if mask >> i & 1))

    @classmethod
    def empty(cls) -> "Budget":
        return cls(frozenset(), 0)

    @property
    def mask(self) -> int:
        return sum(1 << a for a in self.members)

    def sorted_ids(self) -> list[int]:
        return sorted(self.members)

    def __contains__(self, item_id: object) -> bool:
        return item_id in self.members

    def __len__(self) -> int:
        return len(self.members)


class Approach(enum.Enum):
    MAX = "max"
    GREEDY = "greedy"
    PROP_GREEDY = "propgreedy"


@dataclass(frozen=True)
class RuleSpec:
    """One rule of the framework: an approach paired with a satisfaction function."""

    approach: Approach
    satisfaction: "object"  # SatisfactionFnId; typed loosely to avoid an import cycle
    positive_gain_only: bool = field(default=False, compare=False)

    @property
    def name(self) -> str:
        return f"{self.approach.value}-{self.satisfaction.value}"

    def __str__(self) -> str:
        return self.name


def feasibility_check(s: Scenario, b: Budget) -> bool:
    for a in b.members:
        if not (isinstance(a, int) and 0 <= a < s.m):
            raise MalformedBudgetError(f"unknown item id {a!r}")
    return sum(s.costs[a] for a in b.members) <= s.limit


def canonical_key(b: Budget) -> tuple[int, int]:
    return (b.total_cost, b.mask)


def canonical_tiebreak(candidates: Sequence[Budget]) -> Budget:
    if not candidates:
        raise ValueError("canonical_tiebreak needs at least one candidate")
    return min(candidates, key=canonical_key)


# -- text format ------------------------------------------------------------

def _ints(tokens: list[str], lineno: int, what: str) -> list[int]:
    out = []
    for tok in tokens:
        try:
            out.append(int(tok, 10))
        except ValueError:
            raise ScenarioParseError(f"{what}: {tok!r} is not an integer", lineno) from None
    return out


def parse_scenario(text: bytes | str) -> Scenario:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioParseError(f"input is not UTF-8: {exc}") from None
    lines = text.replace("\r\n", "\n").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ScenarioParseError("empty input", 1)

    header = _ints(lines[0].split(), 1, "header")
    if len(header) != 3:
        raise ScenarioParseError(f"header needs 3 integers 'm n limit', got {len(header)}", 1)
    m, n, limit = header
    if m < 0 or n < 0:
        raise ScenarioParseError("m and n must be non-negative", 1)
    if not 0 <= limit <= MAX_AMOUNT:
        raise ScenarioParseError(f"limit {limit} out of range", 1)

    if len(lines) < 2 + n:
        raise ScenarioParseError(f"expected {2 + n} lines, got {len(lines)}", len(lines) + 1)
    for extra in range(2 + n, len(lines)):
        if lines[extra].strip():
            raise ScenarioParseError("unexpected content after the last voter line", extra + 1)

    costs = _ints(lines[1].split(), 2, "costs")
    if len(costs) != m:
        raise ScenarioParseError(f"expected {m} costs, got {len(costs)}", 2)
    for c in costs:
        if not 1 <= c <= MAX_AMOUNT:
            raise ScenarioParseError(f"cost {c} must be a positive 64-bit integer", 2)

    approvals = []
    for v in range(n):
        lineno = v + 3
        ids = _ints(lines[lineno - 1].split(), lineno, f"voter {v}")
        for a in ids:
            if not 0 <= a < m:
                raise ScenarioParseError(f"voter {v} approves out-of-range item {a}", lineno)
        if len(set(ids)) != len(ids):
            raise ScenarioParseError(f"voter {v} lists an item twice", lineno)
        approvals.append(ids)
    return Scenario.build(costs, approvals, limit)


def serialize_scenario(s: Scenario) -> bytes:
    lines = [f"{s.m} {s.n} {s.limit}", " ".join(str(c) for c in s.costs)]
    lines.extend(" ".join(str(a) for a in sorted(v.approved)) for v in s.voters)
    return ("\n".join(lines) + "\n").encode("utf-8")
