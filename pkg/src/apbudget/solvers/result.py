from __future__ import annotations

import enum
from dataclasses import dataclass

from apbudget.core import Budget, Scenario


class ExactStrategy(enum.Enum):
    BRUTE_FORCE = "brute"
    BRANCH_AND_BOUND = "bnb"
    SPECIALIZED_DP = "dp"
    FPT_VOTERS = "fpt"

    @classmethod
    def from_name(cls, name: str) -> "ExactStrategy":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown strategy {name!r}; choose from {[m.value for m in cls]}")


@dataclass(frozen=True)
class SolverConfig:
    """Resource caps. Exceeding one raises ResourceCapError instead of running."""

    brute_cap: int = 24  # max items for brute force
    dp_cap: int = 10**6  # max limit for the cost DP
    fpt_cap: int = 20  # max voters for the voter-subset DP
    bnb_node_cap: int | None = None

    def __post_init__(self):
        for name in ("brute_cap", "dp_cap", "fpt_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class SolveResult:
    budget: Budget
    value: int
    trace: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_mask(cls, s: Scenario, mask: int, value: int, trace=()) -> "SolveResult":
        return cls(Budget.from_mask(s, mask), value, tuple(trace))

    @property
    def members(self) -> list[int]:
        return self.budget.sorted_ids()
