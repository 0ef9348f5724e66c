"""Randomized axiom audit reproducing the rule-by-axiom satisfaction matrix.

Each cell first tries the fixtures for its axiom, then seeded random trials.
Trial ``t`` of a cell draws from ``Rng(derive_seed(seed ^ t, axiom index))``,
so scenarios are shared across rules and independent of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from apbudget.axioms.checks import (
    AxiomId,
    AxiomVerdict,
    NoViolationFound,
    Perturbation,
    Violated,
    Witness,
    check,
)
from apbudget.axioms.fixtures import fixtures_for
from apbudget.core import Budget, RuleSpec, Scenario, parse_scenario, serialize_scenario
from apbudget.errors import InvalidPerturbationError, PreconditionError
from apbudget.experiments.rng import Rng, derive_seed
from apbudget.solvers import BUILTIN_RULES, rule_from_name, solve

TABLE_AXIOMS: tuple[AxiomId, ...] = (
    AxiomId.BUDGET_MONO,
    AxiomId.LIMIT_MONO,
    AxiomId.DISCOUNT_MONO,
    AxiomId.SPLITTING_MONO,
    AxiomId.MERGING_MONO,
)

_AXIOM_INDEX = {ax: i for i, ax in enumerate(AxiomId)}
MAX_ATTEMPTS = 20


def _expected() -> dict[tuple[str, AxiomId], bool]:
    """True where the axiom is claimed to hold."""
    fails = {
        AxiomId.BUDGET_MONO: set(),
        AxiomId.LIMIT_MONO: {r.name for r in BUILTIN_RULES},
        AxiomId.DISCOUNT_MONO: {"max-cost", "greedy-cost", "propgreedy-cost"},
        AxiomId.SPLITTING_MONO: {"greedy-cost"},
        AxiomId.MERGING_MONO: {"max-count", "greedy-count", "propgreedy-count", "propgreedy-cover"},
    }
    return {(r.name, ax): r.name not in fails[ax] for r in BUILTIN_RULES for ax in TABLE_AXIOMS}


TABLE1: dict[tuple[str, AxiomId], bool] = _expected()


# -- random instances -------------------------------------------------------

def random_scenario(rng: Rng) -> Scenario:
    """m in [2,10], n in [1,8], costs in [1,10], limit in [1, total cost], approval probability 0.4."""
    m = rng.randint(2, 10)
    n = rng.randint(1, 8)
    costs = [rng.randint(1, 10) for _ in range(m)]
    approvals = [[a for a in range(m) if rng.bernoulli(0.4)] for _ in range(n)]
    return Scenario.build(costs, approvals, rng.randint(1, sum(costs)))


def _composition(rng: Rng, total: int) -> list[int]:
    k = rng.randint(2, min(total, 4))
    cuts = sorted(rng.sample(range(1, total), k - 1))
    bounds = [0] + cuts + [total]
    return [hi - lo for lo, hi in zip(bounds, bounds[1:])]


def _with_clones(rng: Rng, s: Scenario) -> Scenario:
    """Copy one item's approver set onto one to three other items."""
    src = rng.randint(0, s.m - 1)
    others = [a for a in range(s.m) if a != src]
    clones = set(rng.sample(others, rng.randint(1, min(3, len(others)))))
    approvals = []
    for v in s.voters:
        row = set(v.approved) - clones
        if src in v.approved:
            row |= clones
        approvals.append(row)
    return Scenario.build(s.costs, approvals, s.limit)


def random_trial(rule: RuleSpec, axiom: AxiomId, rng: Rng) -> Optional[tuple[Scenario, Perturbation]]:
    """One applicable (scenario, perturbation) pair, or None after MAX_ATTEMPTS misses.

    Merging prefers groups of two or more items; if no attempt yields one, the
    last non-empty winner contributes a single-item merge.
    """
    fallback = None
    for _ in range(MAX_ATTEMPTS):
        s = random_scenario(rng)
        if axiom is AxiomId.BUDGET_MONO:
            return s, Perturbation(axiom)
        if axiom is AxiomId.LIMIT_MONO:
            if s.limit + 1 not in s.costs:
                return s, Perturbation(axiom)
            continue
        if axiom is AxiomId.MERGING_MONO:
            s = _with_clones(rng, s)
        winner = solve(s, rule).budget
        if axiom in (AxiomId.DISCOUNT_MONO, AxiomId.SPLITTING_MONO, AxiomId.STRONG_SPLITTING_MONO):
            pool = [a for a in winner.sorted_ids() if s.costs[a] >= 2]
            if not pool:
                continue
            a = rng.choice(pool)
            if axiom is AxiomId.DISCOUNT_MONO:
                return s, Perturbation(axiom, (a,))
            return s, Perturbation(axiom, (a,), tuple(_composition(rng, s.costs[a])))
        groups: dict[int, list[int]] = {}
        for a in winner.sorted_ids():
            groups.setdefault(s.approver_masks[a], []).append(a)
        mergeable = [g for g in groups.values() if len(g) >= 2]
        if not mergeable:
            if len(winner):
                fallback = (s, Perturbation(axiom, (rng.choice(winner.sorted_ids()),)))
            continue
        group = rng.choice(mergeable)
        chosen = rng.sample(group, rng.randint(2, len(group)))
        return s, Perturbation(axiom, tuple(sorted(chosen)))
    return fallback


# -- cells ------------------------------------------------------------------

def random_search(rule: RuleSpec, axiom: AxiomId, trials: int, seed: int) -> AxiomVerdict:
    """Run ``trials`` random perturbation tests; stop at the first violation."""
    effective = 0
    for t in range(trials):
        rng = Rng(derive_seed(seed ^ t, _AXIOM_INDEX[axiom]))
        drawn = random_trial(rule, axiom, rng)
        if drawn is None:
            continue
        s, pert = drawn
        try:
            verdict = check(rule, s, pert)
        except (PreconditionError, InvalidPerturbationError):
            continue
        effective += 1
        if verdict.violated:
            return verdict
    return AxiomVerdict(axiom, rule, NoViolationFound(effective))


def audit_cell(rule: RuleSpec, axiom: AxiomId, trials: int, seed: int) -> AxiomVerdict:
    for fixture in fixtures_for(axiom):
        try:
            verdict = fixture.run(rule)
        except PreconditionError:
            continue
        if verdict.violated:
            return verdict
    return random_search(rule, axiom, trials, seed)


@dataclass(frozen=True)
class AuditReport:
    verdicts: tuple[AxiomVerdict, ...]
    trials: int
    seed: int

    def cell(self, rule: str, axiom: AxiomId) -> AxiomVerdict:
        for v in self.verdicts:
            if v.rule.name == rule and v.axiom is axiom:
                return v
        raise KeyError((rule, axiom))

    def mismatches(self) -> list[AxiomVerdict]:
        """Cells whose outcome disagrees with TABLE1 (cells outside it never mismatch)."""
        out = []
        for v in self.verdicts:
            expected = TABLE1.get((v.rule.name, v.axiom))
            if expected is not None and expected == v.violated:
                out.append(v)
        return out


def audit_matrix(
    trials: int,
    seed: int,
    rules: Sequence[RuleSpec] = BUILTIN_RULES,
    axioms: Sequence[AxiomId] = TABLE_AXIOMS,
    threads: int = 1,
) -> AuditReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cells = [(r, ax) for ax in axioms for r in rules]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(lambda c: audit_cell(c[0], c[1], trials, seed), cells))
    else:
        verdicts = [audit_cell(r, ax, trials, seed) for r, ax in cells]
    return AuditReport(tuple(verdicts), trials, seed)


# -- text output and witness files ------------------------------------------

def outcome_mark(v: AxiomVerdict) -> str:
    return "x" if v.violated else "ok"


def render_matrix(report: AuditReport) -> str:
    rules = list(dict.fromkeys(v.rule.name for v in report.verdicts))
    axioms = list(dict.fromkeys(v.axiom for v in report.verdicts))
    width = max(len(ax.value) for ax in axioms)
    colw = max(len(r) for r in rules)
    lines = [" " * width + "  " + "  ".join(r.rjust(colw) for r in rules)]
    for ax in axioms:
        marks = [outcome_mark(report.cell(r, ax)).rjust(colw) for r in rules]
        lines.append(ax.value.ljust(width) + "  " + "  ".join(marks))
    return "\n".join(lines) + "\n"


def witness_text(w: Witness, axiom: AxiomId) -> bytes:
    body = serialize_scenario(w.scenario).decode()
    extra = [
        f"rule {w.rule.name}",
        w.perturbation.describe(),
        "before " + ",".join(map(str, w.before.sorted_ids())),
        "after " + ",".join(map(str, w.after.sorted_ids())),
    ]
    return (body + "\n".join(extra) + "\n").encode()


def write_witness(v: AxiomVerdict, directory: Path) -> Path:
    if not isinstance(v.outcome, Violated):
        raise ValueError("only violated verdicts have witnesses")
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{v.rule.name}_{v.axiom.value}.txt"
    path.write_bytes(witness_text(v.outcome.witness, v.axiom))
    return path


def read_witness(data: bytes) -> Witness:
    """Inverse of :func:`witness_text`; the last four lines carry the rule, perturbation and budgets."""
    lines = data.decode().rstrip("\n").split("\n")
    if len(lines) < 6:
        raise InvalidPerturbationError("witness file is too short")
    head, tail = lines[:-4], lines[-4:]
    keys = [t.split(" ", 1)[0] for t in tail]
    if keys != ["rule", "perturbation", "before", "after"]:
        raise InvalidPerturbationError(f"unexpected witness trailer {keys}")
    s = parse_scenario("\n".join(head) + "\n")
    rule = rule_from_name(tail[0].split()[1])
    pert = Perturbation.parse(tail[1])

    def ids(line: str) -> list[int]:
        parts = line.split()
        return [int(x) for x in parts[1].split(",")] if len(parts) > 1 else []

    target = pert.apply(s) if pert.axiom is not AxiomId.BUDGET_MONO else s
    return Witness(rule, s, pert, Budget.of(s, ids(tail[2])), Budget.of(target, ids(tail[3])))
