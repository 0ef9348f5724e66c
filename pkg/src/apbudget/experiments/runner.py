"""Repeated seeded elections: per-rule histograms and per-group spending."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from apbudget.core import Approach, RuleSpec
from apbudget.errors import BudgetingError
from apbudget.experiments.generators import PointConfig, PointSample, build_scenario
from apbudget.experiments.histogram import Histogram
from apbudget.experiments.rng import Rng, derive_seed
from apbudget.solvers import BUILTIN_RULES, solve

log = logging.getLogger(__name__)

# greedy rules stop at zero gain in experiments so unapproved items stay unfunded
EXPERIMENT_RULES: tuple[RuleSpec, ...] = tuple(
    RuleSpec(r.approach, r.satisfaction, positive_gain_only=r.approach is not Approach.MAX) for r in BUILTIN_RULES
)


@dataclass
class RuleTotals:
    histogram: Histogram = field(default_factory=Histogram)
    group_funds: dict[str, int] = field(default_factory=dict)

    def add(self, other: "RuleTotals") -> None:
        self.histogram.merge(other.histogram)
        for g, v in other.group_funds.items():
            self.group_funds[g] = self.group_funds.get(g, 0) + v


@dataclass
class ExperimentResult:
    rules: tuple[RuleSpec, ...]
    repetitions: int
    totals: dict[str, RuleTotals]

    def funds(self, rule: str, group: str) -> int:
        return self.totals[rule].group_funds.get(group, 0)

    def share(self, rule: str, group: str) -> float:
        """Fraction of the rule's total spending that went to ``group``."""
        total = self.totals[rule].histogram.total_funds
        return self.funds(rule, group) / total if total else 0.0

    def average(self, rule: str, group: str) -> float:
        return self.funds(rule, group) / self.repetitions


def repetition_seed(seed: int, rep: int) -> int:
    return derive_seed(seed, rep)


def _one(config: PointConfig, rules: Sequence[RuleSpec], seed: int, rep: int) -> dict[str, RuleTotals]:
    sample: PointSample = build_scenario(config, Rng(repetition_seed(seed, rep)))
    s = sample.scenario
    out = {}
    for rule in rules:
        try:
            winner = solve(s, rule).budget
        except BudgetingError as exc:
            raise type(exc)(f"repetition {rep}, rule {rule.name}: {exc}") from exc
        t = RuleTotals()
        t.histogram.accumulate(s, winner, sample.item_points)
        for a in winner.members:
            g = sample.item_groups[a]
            t.group_funds[g] = t.group_funds.get(g, 0) + s.costs[a]
        out[rule.name] = t
    log.debug("repetition %d done", rep)
    return out


def run_experiment(
    config: PointConfig,
    rules: Sequence[RuleSpec] = EXPERIMENT_RULES,
    repetitions: int = 20,
    seed: int = 1,
    threads: int = 1,
    progress: Callable[[int], None] | None = None,
) -> ExperimentResult:
    """Draw ``repetitions`` scenarios and solve each under every rule.

    Repetition ``r`` is seeded with ``derive_seed(seed, r)`` whatever the
    configuration, so parameter sweeps share their random draws.  Funds are
    integers and are summed in repetition order, so results do not depend on
    ``threads``.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    rules = tuple(rules)
    totals = {r.name: RuleTotals() for r in rules}

    def job(rep: int):
        return _one(config, rules, seed, rep)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(job, range(repetitions))
            for rep, part in enumerate(parts):
                for name, t in part.items():
                    totals[name].add(t)
                if progress:
                    progress(rep)
    else:
        for rep in range(repetitions):
            for name, t in job(rep).items():
                totals[name].add(t)
            if progress:
                progress(rep)
    return ExperimentResult(rules, repetitions, totals)
