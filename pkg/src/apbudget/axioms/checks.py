"""Axiom identifiers, perturbations and single-instance violation checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from apbudget.core import Approach, Budget, RuleSpec, Scenario
from apbudget.errors import InvalidPerturbationError, PreconditionError
from apbudget.satisfaction import resolve
from apbudget.solvers import solve

# feasible supersets are enumerated exhaustively up to this many spare items
FULL_EXTENSION_CAP = 12


class AxiomId(enum.Enum):
    BUDGET_MONO = "budget"
    LIMIT_MONO = "limit"
    DISCOUNT_MONO = "discount"
    SPLITTING_MONO = "splitting"
    STRONG_SPLITTING_MONO = "strongsplitting"
    MERGING_MONO = "merging"

    @classmethod
    def from_name(cls, name: str) -> "AxiomId":
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown axiom {name!r}; choose from {[m.value for m in cls]}")


# -- perturbations ----------------------------------------------------------

def apply_split(s: Scenario, a: int, parts) -> Scenario:
    """Replace item ``a`` by ``len(parts)`` items with the given costs.

    The new items take ids ``a .. a+k-1``; later items shift up by ``k-1``.
    Every approver of ``a`` approves all new items.
    """
    parts = [int(p) for p in parts]
    if not 0 <= a < s.m:
        raise InvalidPerturbationError(f"unknown item {a}")
    if not parts or any(p < 1 for p in parts):
        raise InvalidPerturbationError("split parts must be a non-empty list of positive costs")
    if sum(parts) != s.costs[a]:
        raise InvalidPerturbationError(f"split parts sum to {sum(parts)}, item {a} costs {s.costs[a]}")
    k = len(parts)
    costs = list(s.costs[:a]) + parts + list(s.costs[a + 1 :])

    def relabel(x: int) -> list[int]:
        if x < a:
            return [x]
        if x == a:
            return list(range(a, a + k))
        return [x + k - 1]

    approvals = [[y for x in v.approved for y in relabel(x)] for v in s.voters]
    return Scenario.build(costs, approvals, s.limit)


def apply_merge(s: Scenario, items) -> Scenario:
    """Replace ``items`` by one item of summed cost placed at ``min(items)``.

    Every voter must approve all of ``items`` or none; the rest are compacted.
    """
    group = sorted(set(int(x) for x in items))
    if not group:
        raise InvalidPerturbationError("cannot merge an empty set of items")
    if any(not 0 <= x < s.m for x in group):
        raise InvalidPerturbationError(f"unknown item in {group}")
    gset = set(group)
    for v in s.voters:
        inside = v.approved & gset
        if inside and inside != gset:
            raise InvalidPerturbationError(f"voter {v.voter_id} approves only part of {group}")
    head = group[0]
    kept = [x for x in range(s.m) if x not in gset or x == head]
    new_id = {x: i for i, x in enumerate(kept)}
    costs = [sum(s.costs[x] for x in group) if x == head else s.costs[x] for x in kept]
    approvals = []
    for v in s.voters:
        row = {new_id[x] for x in v.approved if x not in gset}
        if v.approved & gset:
            row.add(new_id[head])
        approvals.append(row)
    return Scenario.build(costs, approvals, s.limit)


@dataclass(frozen=True)
class Perturbation:
    """How the second scenario of a check is obtained from the first.

    ``items`` lists the added items (budget), the merged items (merging) or
    the single discounted / split item (discount, splitting).
    """

    axiom: AxiomId
    items: tuple[int, ...] = ()
    parts: tuple[int, ...] = ()

    def apply(self, s: Scenario) -> Scenario:
        ax = self.axiom
        if ax is AxiomId.BUDGET_MONO:
            return s
        if ax is AxiomId.LIMIT_MONO:
            return s.with_limit(s.limit + 1)
        if ax is AxiomId.DISCOUNT_MONO:
            (b,) = self.items
            costs = list(s.costs)
            costs[b] -= 1
            return s.with_costs(costs)
        if ax in (AxiomId.SPLITTING_MONO, AxiomId.STRONG_SPLITTING_MONO):
            return apply_split(s, self.items[0], self.parts)
        return apply_merge(s, self.items)

    def describe(self) -> str:
        words = ["perturbation", self.axiom.value]
        if self.items:
            words.append(",".join(map(str, self.items)))
        if self.parts:
            words.append(",".join(map(str, self.parts)))
        return " ".join(words)

    @classmethod
    def parse(cls, line: str) -> "Perturbation":
        words = line.split()
        if len(words) < 2 or words[0] != "perturbation":
            raise InvalidPerturbationError(f"not a perturbation line: {line!r}")
        try:
            axiom = AxiomId.from_name(words[1])
            lists = [tuple(int(x) for x in w.split(",")) for w in words[2:4]]
        except ValueError as exc:
            raise InvalidPerturbationError(str(exc)) from None
        lists += [()] * (2 - len(lists))
        return cls(axiom, lists[0], lists[1])


# -- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """A scenario pair with the two winning budgets that contradict the axiom.

    For Budget Monotonicity both budgets live in the same scenario: ``before``
    wins and ``after`` is a feasible superset of strictly lower value (or an
    affordable extension of a non-maximal greedy winner).
    """

    rule: RuleSpec
    scenario: Scenario
    perturbation: Perturbation
    before: Budget
    after: Budget

    @property
    def perturbed(self) -> Scenario:
        return self.perturbation.apply(self.scenario)

    def replay(self) -> bool:
        """Re-run the rule; True iff the same two budgets and the violation recur."""
        verdict = check(self.rule, self.scenario, self.perturbation)
        if not isinstance(verdict.outcome, Violated):
            return False
        w = verdict.outcome.witness
        return (w.before, w.after) == (self.before, self.after)


@dataclass(frozen=True)
class NoViolationFound:
    trials: int


@dataclass(frozen=True)
class Violated:
    witness: Witness


Outcome = Union[NoViolationFound, Violated]


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: AxiomId
    rule: RuleSpec
    outcome: Outcome

    @property
    def violated(self) -> bool:
        return isinstance(self.outcome, Violated)


def _verdict(axiom, rule, s, pert, before, after, bad: bool) -> AxiomVerdict:
    if bad:
        return AxiomVerdict(axiom, rule, Violated(Witness(rule, s, pert, before, after)))
    return AxiomVerdict(axiom, rule, NoViolationFound(1))


# -- checks -----------------------------------------------------------------

def _feasible_extensions(s: Scenario, winner: Budget):
    """Yield bitmasks of non-empty sets of extra items that keep the budget feasible."""
    spare = [a for a in range(s.m) if a not in winner and s.costs[a] <= s.limit - winner.total_cost]
    if len(spare) > FULL_EXTENSION_CAP:
        for a in spare:
            yield 1 << a
        return
    room = s.limit - winner.total_cost

    def walk(k: int, mask: int, used: int):
        if k == len(spare):
            if mask:
                yield mask
            return
        yield from walk(k + 1, mask, used)
        a = spare[k]
        if used + s.costs[a] <= room:
            yield from walk(k + 1, mask | 1 << a, used + s.costs[a])

    yield from walk(0, 0, 0)


def check_budget_mono(rule: RuleSpec, s: Scenario) -> AxiomVerdict:
    """Greedy winners must be maximal; a Max winner must not beat any feasible superset."""
    won = solve(s, rule)
    winner = won.budget
    axiom = AxiomId.BUDGET_MONO
    if rule.approach is not Approach.MAX:
        residual = s.limit - winner.total_cost
        for a in range(s.m):
            if a not in winner and s.costs[a] <= residual:
                bigger = Budget.of(s, winner.members | {a})
                return _verdict(axiom, rule, s, Perturbation(axiom, (a,)), winner, bigger, True)
        return _verdict(axiom, rule, s, Perturbation(axiom), winner, winner, False)
    f = resolve(rule.satisfaction)
    base = winner.mask
    for extra in _feasible_extensions(s, winner):
        if f.total(s, base | extra) < won.value:
            bigger = Budget.from_mask(s, base | extra)
            added = tuple(sorted(bigger.members - winner.members))
            return _verdict(axiom, rule, s, Perturbation(axiom, added), winner, bigger, True)
    return _verdict(axiom, rule, s, Perturbation(axiom), winner, winner, False)


def check_limit_mono(rule: RuleSpec, s: Scenario) -> AxiomVerdict:
    if any(c == s.limit + 1 for c in s.costs):
        raise PreconditionError(f"an item costs exactly limit+1 = {s.limit + 1}")
    pert = Perturbation(AxiomId.LIMIT_MONO)
    before = solve(s, rule).budget
    after = solve(pert.apply(s), rule).budget
    return _verdict(AxiomId.LIMIT_MONO, rule, s, pert, before, after, not before.members <= after.members)


def check_discount_mono(rule: RuleSpec, s: Scenario, b: int) -> AxiomVerdict:
    before = solve(s, rule).budget
    if b not in before:
        raise PreconditionError(f"item {b} is not in the winning budget {before.sorted_ids()}")
    if s.costs[b] < 2:
        raise PreconditionError(f"item {b} costs 1 and cannot be discounted")
    pert = Perturbation(AxiomId.DISCOUNT_MONO, (b,))
    after = solve(pert.apply(s), rule).budget
    return _verdict(AxiomId.DISCOUNT_MONO, rule, s, pert, before, after, b not in after)


def check_splitting_mono(rule: RuleSpec, s: Scenario, a: int, parts, strong: bool = False) -> AxiomVerdict:
    axiom = AxiomId.STRONG_SPLITTING_MONO if strong else AxiomId.SPLITTING_MONO
    pert = Perturbation(axiom, (a,), tuple(int(p) for p in parts))
    split = pert.apply(s)
    before = solve(s, rule).budget
    if a not in before:
        raise PreconditionError(f"item {a} is not in the winning budget {before.sorted_ids()}")
    after = solve(split, rule).budget
    new = set(range(a, a + len(pert.parts)))
    bad = not new <= after.members if strong else not new & after.members
    return _verdict(axiom, rule, s, pert, before, after, bad)


def check_merging_mono(rule: RuleSpec, s: Scenario, items) -> AxiomVerdict:
    pert = Perturbation(AxiomId.MERGING_MONO, tuple(sorted(set(int(x) for x in items))))
    merged = pert.apply(s)
    before = solve(s, rule).budget
    if not set(pert.items) <= before.members:
        raise PreconditionError(f"items {list(pert.items)} are not all in the winning budget {before.sorted_ids()}")
    after = solve(merged, rule).budget
    return _verdict(AxiomId.MERGING_MONO, rule, s, pert, before, after, pert.items[0] not in after)


def check(rule: RuleSpec, s: Scenario, pert: Perturbation) -> AxiomVerdict:
    """Dispatch on ``pert.axiom``; the perturbation's arguments select the item(s)."""
    ax = pert.axiom
    if ax is AxiomId.BUDGET_MONO:
        return check_budget_mono(rule, s)
    if ax is AxiomId.LIMIT_MONO:
        return check_limit_mono(rule, s)
    if ax is AxiomId.DISCOUNT_MONO:
        return check_discount_mono(rule, s, pert.items[0])
    if ax in (AxiomId.SPLITTING_MONO, AxiomId.STRONG_SPLITTING_MONO):
        return check_splitting_mono(rule, s, pert.items[0], pert.parts, ax is AxiomId.STRONG_SPLITTING_MONO)
    return check_merging_mono(rule, s, pert.items)
