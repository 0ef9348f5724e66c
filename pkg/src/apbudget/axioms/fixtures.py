"""Hand-built counterexample instances, one per claimed axiom failure.

Where a published instance only shows that a budget *might* win, items are
ordered so that the canonical tie-break picks that budget.  Letters in the
comments name items as in the published instances; ids are list positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from apbudget.axioms.checks import AxiomId, AxiomVerdict, Perturbation, check
from apbudget.core import RuleSpec, Scenario


@dataclass(frozen=True)
class Fixture:
    name: str
    axiom: AxiomId
    scenario: Scenario
    perturbation: Perturbation
    rules: tuple[str, ...]  # rules this instance is meant to break
    published: bool = True

    def run(self, rule: RuleSpec) -> AxiomVerdict:
        return check(rule, self.scenario, self.perturbation)


def _fx(name, axiom, costs, approvals, limit, rules, items=(), parts=(), published=True) -> Fixture:
    return Fixture(
        name,
        axiom,
        Scenario.build(costs, approvals, limit),
        Perturbation(axiom, tuple(items), tuple(parts)),
        tuple(rules),
        published,
    )


_L, _D, _S, _SS, _M = (
    AxiomId.LIMIT_MONO,
    AxiomId.DISCOUNT_MONO,
    AxiomId.SPLITTING_MONO,
    AxiomId.STRONG_SPLITTING_MONO,
    AxiomId.MERGING_MONO,
)

# ids: b=0, a=1, c=2; voters {a}, {a,b}, {b,c}, {c}
LIMIT_COVER = _fx("limit-cover", _L, [1, 1, 1], [[1], [0, 1], [0, 2], [2]], 1, ["max-cover"])
# a, b, c, d with costs 2, 3, 3, 5
LIMIT_COST = _fx("limit-cost", _L, [2, 3, 3, 5], [[0, 1, 2, 3]], 6, ["max-cost"])
LIMIT_COUNT = _fx(
    "limit-count", _L, [2, 3, 3, 5], [[0, 1, 2, 3], [0, 1, 2, 3], [1, 2, 3], [3], [3]], 6, ["max-count"]
)
# a (cost 5, ten voters), b (cost 1, one voter), c (cost 2, three voters); each approved exclusively
LIMIT_GREEDY = _fx(
    "limit-greedy",
    _L,
    [5, 1, 2],
    [[0]] * 10 + [[1]] + [[2]] * 3,
    6,
    ["greedy-count", "greedy-cover", "greedy-cost", "propgreedy-count", "propgreedy-cover", "propgreedy-cost"],
    published=False,
)
# ids: b=0, a=1; discount b from 2 to 1
DISCOUNT_COST = _fx(
    "discount-cost", _D, [2, 2], [[0, 1]], 2, ["max-cost", "greedy-cost", "propgreedy-cost"], items=[0]
)
# ids: b=0, a=1; split b into three unit items
SPLIT_GREEDY_COST = _fx("split-greedy-cost", _S, [3, 3], [[0, 1]], 3, ["greedy-cost"], items=[0], parts=[1, 1, 1])
# a (cost 2, voters 0 and 1) takes the whole limit; after a split b fits beside one part
STRONG_SPLIT_COVER = _fx(
    "strongsplit-cover", _SS, [2, 1], [[0], [0], [1]], 2, ["max-cover"], items=[0], parts=[1, 1]
)
# a, b, c cost 1; d, e cost 2; merge {a, b, c}
MERGE_COUNT = _fx(
    "merge-count",
    _M,
    [1, 1, 1, 2, 2],
    [[0, 1, 2, 3, 4], [0, 1, 2, 3, 4], [0, 1, 2]],
    4,
    ["max-count", "greedy-count", "propgreedy-count"],
    items=[0, 1, 2],
)
# a, b cost 1 share two voters; d costs 2 with three voters; merge {a, b}
MERGE_PROP = _fx(
    "merge-prop",
    _M,
    [1, 1, 2],
    [[0, 1], [0, 1], [2], [2], [2]],
    2,
    ["propgreedy-count", "propgreedy-cover"],
    items=[0, 1],
    published=False,
)

FIXTURES: tuple[Fixture, ...] = (
    LIMIT_COVER,
    LIMIT_COST,
    LIMIT_COUNT,
    LIMIT_GREEDY,
    DISCOUNT_COST,
    SPLIT_GREEDY_COST,
    STRONG_SPLIT_COVER,
    MERGE_COUNT,
    MERGE_PROP,
)


def fixtures_for(axiom: AxiomId) -> list[Fixture]:
    return [f for f in FIXTURES if f.axiom is axiom]
