"""Winning-budget computation for every rule of the framework."""

from __future__ import annotations

from apbudget.core import Approach, RuleSpec, Scenario
from apbudget.errors import UnsupportedPairingError
from apbudget.satisfaction import SatisfactionFnId, SatisfactionFunction, resolve
from apbudget.solvers.bnb import solve_branch_and_bound
from apbudget.solvers.brute import solve_brute_force
from apbudget.solvers.dp import solve_max_cost_dp, solve_max_cost_fptas, solve_max_count_dp
from apbudget.solvers.fpt import solve_max_cover_fpt_voters
from apbudget.solvers.greedy import solve_greedy, solve_prop_greedy
from apbudget.solvers.result import DEFAULT_CONFIG, ExactStrategy, SolveResult, SolverConfig

__all__ = [
    "BUILTIN_RULES",
    "DEFAULT_CONFIG",
    "ExactStrategy",
    "SolveResult",
    "SolverConfig",
    "default_strategy",
    "rule_from_name",
    "solve",
    "solve_branch_and_bound",
    "solve_brute_force",
    "solve_greedy",
    "solve_max_cost_dp",
    "solve_max_cost_fptas",
    "solve_max_count_dp",
    "solve_max_cover_fpt_voters",
    "solve_max_exact",
    "solve_prop_greedy",
]

_MAIN_FNS = (SatisfactionFnId.COUNT, SatisfactionFnId.COVER, SatisfactionFnId.COST)

# column order of the axiom table: satisfaction function outer, approach inner
BUILTIN_RULES: tuple[RuleSpec, ...] = tuple(
    RuleSpec(approach, fn) for fn in _MAIN_FNS for approach in Approach
)


def rule_from_name(name: str) -> RuleSpec:
    """Parse ``"<approach>-<satisfaction>"``, e.g. ``"max-cover"``."""
    try:
        approach, fn = name.split("-", 1)
        return RuleSpec(Approach(approach), SatisfactionFnId.from_name(fn))
    except ValueError:
        raise ValueError(f"unknown rule {name!r}; expected <max|greedy|propgreedy>-<count|cover|cost|mincost>") from None


def _fn_id(fn) -> SatisfactionFnId | None:
    if isinstance(fn, SatisfactionFnId):
        return fn
    if isinstance(fn, str):
        return SatisfactionFnId.from_name(fn)
    return None


def default_strategy(fn) -> ExactStrategy:
    fid = _fn_id(fn)
    if fid in (SatisfactionFnId.COUNT, SatisfactionFnId.COST):
        return ExactStrategy.SPECIALIZED_DP
    if fid is SatisfactionFnId.COVER:
        return ExactStrategy.BRANCH_AND_BOUND
    return ExactStrategy.BRUTE_FORCE


def solve_max_exact(
    s: Scenario,
    fn: "SatisfactionFnId | SatisfactionFunction | str",
    strategy: ExactStrategy | str | None = None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> SolveResult:
    """Exact Max rule: a feasible budget of maximal total satisfaction, canonical among ties."""
    if isinstance(strategy, str):
        strategy = ExactStrategy.from_name(strategy)
    if strategy is None:
        strategy = default_strategy(fn)
    fid = _fn_id(fn)
    if strategy is ExactStrategy.BRUTE_FORCE:
        return solve_brute_force(s, fn, config)
    if strategy is ExactStrategy.BRANCH_AND_BOUND:
        return solve_branch_and_bound(s, fn, config)
    if strategy is ExactStrategy.SPECIALIZED_DP:
        if fid is SatisfactionFnId.COUNT:
            return solve_max_count_dp(s)
        if fid is SatisfactionFnId.COST:
            return solve_max_cost_dp(s, config)
        raise UnsupportedPairingError(f"the specialized DP supports count and cost only, not {resolve(fn).name!r}")
    if strategy is ExactStrategy.FPT_VOTERS:
        if fid is SatisfactionFnId.COVER:
            return solve_max_cover_fpt_voters(s, config)
        raise UnsupportedPairingError(f"the voter-subset DP supports cover only, not {resolve(fn).name!r}")
    raise ValueError(f"unknown strategy {strategy!r}")


def solve(
    s: Scenario,
    rule: RuleSpec,
    strategy: ExactStrategy | str | None = None,
    epsilon=None,
    config: SolverConfig = DEFAULT_CONFIG,
) -> SolveResult:
    """Winning budget of ``rule`` on ``s``.

    ``epsilon`` switches the cost Max rule to the FPTAS.
    """
    if rule.approach is Approach.GREEDY:
        return solve_greedy(s, rule.satisfaction, rule.positive_gain_only)
    if rule.approach is Approach.PROP_GREEDY:
        return solve_prop_greedy(s, rule.satisfaction, rule.positive_gain_only)
    if epsilon is not None:
        if _fn_id(rule.satisfaction) is not SatisfactionFnId.COST:
            raise UnsupportedPairingError("the FPTAS applies to the cost satisfaction function only")
        return solve_max_cost_fptas(s, epsilon)
    return solve_max_exact(s, rule.satisfaction, strategy, config)
