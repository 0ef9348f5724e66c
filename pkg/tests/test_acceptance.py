"""Acceptance gate: one test per primary criterion, each printing a PASS/FAIL line."""
import io
import math
import random
import time
from pathlib import Path

import pytest

from apbudget.axioms import TABLE1
from apbudget.axioms.fixtures import (
    DISCOUNT_COST,
    LIMIT_COST,
    LIMIT_COUNT,
    LIMIT_COVER,
    MERGE_COUNT,
    SPLIT_GREEDY_COST,
)
from apbudget.cli import main
from apbudget.core import Scenario
from apbudget.experiments.generators import exp1_config, exp2_config, exp3_config
from apbudget.experiments.runner import EXPERIMENT_RULES, run_experiment
from apbudget.solvers import (
    rule_from_name,
    solve,
    solve_branch_and_bound,
    solve_brute_force,
    solve_greedy,
    solve_max_cost_dp,
    solve_max_cost_fptas,
    solve_max_count_dp,
    solve_max_cover_fpt_voters,
)

import oracle

def _rules(*names):
    return [r for r in EXPERIMENT_RULES if r.name in names]


def _run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_oracle_equivalence(acceptance_report):
    rng = random.Random(20240501)
    cases = [oracle.random_scenario(rng, max_m=12, max_n=8, max_cost=20, max_limit=60) for _ in range(500)]
    start = time.perf_counter()
    bad = []
    for i, s in enumerate(cases):
        ref = {fn: solve_brute_force(s, fn).value for fn in ("count", "cost", "cover")}
        got = [
            ("count-dp", solve_max_count_dp(s).value, ref["count"]),
            ("cost-dp", solve_max_cost_dp(s).value, ref["cost"]),
            ("cover-fpt", solve_max_cover_fpt_voters(s).value, ref["cover"]),
        ]
        got += [(f"bnb-{fn}", solve_branch_and_bound(s, fn).value, ref[fn]) for fn in ref]
        bad += [(i, name) for name, v, want in got if v != want]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    acceptance_report("oracle equivalence", ok, f"500 scenarios, {len(bad)} mismatches, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


def test_published_counterexamples(acceptance_report):
    facts = {}
    s = LIMIT_COVER.scenario
    facts["limit cover l=1 value 2"] = solve_brute_force(s, "cover").value == 2
    facts["limit cover l=2 -> {b,c}"] = solve_brute_force(s.with_limit(2), "cover").members == [1, 2]
    for fixture, fn in ((LIMIT_COST, "cost"), (LIMIT_COUNT, "count")):
        t = fixture.scenario
        facts[f"limit {fn} l=6 -> {{b,c}}"] = solve_brute_force(t, fn).members == [1, 2]
        facts[f"limit {fn} l=7 -> {{a,d}}"] = solve_brute_force(t.with_limit(7), fn).members == [0, 3]
        best = oracle.max_rule(fn, t)[0]
        optima = [set(w) for w in oracle.feasible_sets(t) if oracle.total(fn, t, w) == best]
        facts[f"limit {fn} l=6 unique optimum"] = optima == [{1, 2}]
    d = DISCOUNT_COST
    facts["discount before {b}"] = solve(d.scenario, rule_from_name("max-cost")).members == [0]
    facts["discount after {a}"] = solve(d.perturbation.apply(d.scenario), rule_from_name("max-cost")).members == [1]
    split = SPLIT_GREEDY_COST.perturbation.apply(SPLIT_GREEDY_COST.scenario)
    facts["split greedy-cost picks a"] = solve(split, rule_from_name("greedy-cost")).members == [3]
    m = MERGE_COUNT
    facts["merge before {a,b,c}"] = solve(m.scenario, rule_from_name("max-count")).members == [0, 1, 2]
    facts["merge after {d,e}"] = solve(m.perturbation.apply(m.scenario), rule_from_name("max-count")).members == [1, 2]
    failed = [k for k, v in facts.items() if not v]
    acceptance_report("published counterexamples", not failed, f"{len(facts)} facts, failed: {failed or 'none'}")
    assert not failed


def test_table1_audit(acceptance_report, tmp_path):
    start = time.perf_counter()
    code, out, err = _run_cli("axioms", "--trials", "200", "--seed", "1", "--out", str(tmp_path))
    elapsed = time.perf_counter() - start
    rows = [line.split(",") for line in out.splitlines() if line.count(",") == 3 and not line.startswith("rule,")]
    seen = {(r[0], r[1]): r[2] == "violated" for r in rows}
    want = {(rule, ax.value): not holds for (rule, ax), holds in TABLE1.items()}
    wrong = sorted(k for k in want if seen.get(k) != want[k])
    ok = code == 0 and not wrong and elapsed < 300
    acceptance_report(
        "table 1 audit",
        ok,
        f"exit {code}, {len(want) - len(wrong)}/{len(want)} cells match, mismatched {wrong}, {elapsed:.0f}s",
    )
    assert len(seen) == 45
    assert elapsed < 300
    assert code == 0 and not wrong


def test_fptas_guarantee(acceptance_report):
    rng = random.Random(7)
    cases = [oracle.random_scenario(rng, max_m=12, max_n=8, max_cost=20, max_limit=60) for _ in range(100)]
    bad = []
    for eps in (0.1, 0.3):
        for i, s in enumerate(cases):
            exact = solve_max_cost_dp(s).value
            approx = solve_max_cost_fptas(s, eps).value
            if approx < (1 - eps) * exact:
                bad.append((eps, i))
    acceptance_report("fptas guarantee", not bad, f"200 runs, {len(bad)} below (1-eps)*opt")
    assert not bad


def test_greedy_coverage_bound(acceptance_report):
    rng = random.Random(11)
    bad = []
    for i in range(200):
        m = rng.randint(1, 12)
        n = rng.randint(1, 8)
        voters = [[a for a in range(m) if rng.random() < 0.3] for _ in range(n)]
        s = Scenario.build([1] * m, voters, rng.randint(1, m))
        opt = solve_brute_force(s, "cover").value
        if solve_greedy(s, "cover").value < (1 - 1 / math.e) * opt:
            bad.append(i)
    acceptance_report("greedy coverage bound", not bad, f"200 instances, {len(bad)} below (1-1/e)*opt")
    assert not bad


@pytest.mark.slow
def test_exp1_thresholds_artifact_chosen_5pct_20pct(acceptance_report):
    rules = _rules("max-count", "max-cover", "max-cost")
    share = {}
    for x in (30, 90, 190):
        res = run_experiment(exp1_config(x), rules, repetitions=20, seed=1)
        for r in rules:
            share[r.name, x] = res.share(r.name, "expensive")
    checks = {
        "max-count <5% at x=30": share["max-count", 30] < 0.05,
        "max-cover >=5% at x=90": share["max-cover", 90] >= 0.05,
        "max-cover <5% at x=190": share["max-cover", 190] < 0.05,
        "max-cost >=20% at x=190": share["max-cost", 190] >= 0.20,
    }
    detail = "; ".join(f"{k}: {'ok' if v else 'no'}" for k, v in checks.items())
    detail += " | shares " + ", ".join(f"{r}@{x}={v:.3f}" for (r, x), v in sorted(share.items()))
    acceptance_report("experiment 1 thresholds (artifact-chosen 5%/20%)", all(checks.values()), detail)
    assert all(checks.values()), detail


@pytest.mark.slow
def test_exp2_thresholds_artifact_chosen_90pct_50pct(acceptance_report):
    rules = _rules("max-count", "max-cost")
    share = {}
    for x in (10, 50, 70):
        res = run_experiment(exp2_config(x), rules, repetitions=20, seed=1)
        for r in rules:
            share[r.name, x] = res.share(r.name, "expensive")
    checks = {
        "max-cost >90% at x=10": share["max-cost", 10] > 0.9,
        "max-count >90% at x=70": share["max-count", 70] > 0.9,
        "max-count <50% at x=50": share["max-count", 50] < 0.5,
    }
    detail = "; ".join(f"{k}: {'ok' if v else 'no'}" for k, v in checks.items())
    acceptance_report("experiment 2 thresholds (artifact-chosen 90%/50%)", all(checks.values()), detail)
    assert all(checks.values()), detail


@pytest.mark.slow
def test_exp3_local_funds_ordering(acceptance_report):
    rules = _rules("max-count", "max-cover", "max-cost")
    rows = []
    for p in (0.5, 0.75, 1.0):
        res = run_experiment(exp3_config(p, 20), rules, repetitions=20, seed=1)
        avg = {r.name: res.average(r.name, "local") for r in rules}
        rows.append((p, avg, avg["max-cost"] <= avg["max-count"] <= avg["max-cover"]))
    ok = all(r[2] for r in rows)
    detail = "; ".join(f"p={p}: cost {a['max-cost']}, count {a['max-count']}, cover {a['max-cover']}" for p, a, _ in rows)
    acceptance_report("experiment 3 local funds ordering", ok, detail)
    assert ok


def _tree(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_thread_count_determinism(acceptance_report, tmp_path):
    invocations = [
        ("experiment", "one", "--reps", "2", "--x", "10,30"),
        ("experiment", "two", "--reps", "2", "--x", "0,10"),
        ("experiment", "three", "--reps", "3", "--p", "0,0.5,1", "--limit", "20"),
        ("axioms", "--trials", "20", "--seed", "3"),
    ]
    diffs = []
    for k, argv in enumerate(invocations):
        results = []
        for threads in ("1", "4"):
            out_dir = tmp_path / f"{k}-{threads}"
            code, out, _ = _run_cli(*argv, "--threads", threads, "--out", str(out_dir))
            results.append((code, out.replace(str(out_dir), "OUT"), _tree(out_dir)))
        if results[0] != results[1] or not results[0][2]:
            diffs.append(" ".join(argv[:2]))
    acceptance_report("thread-count determinism", not diffs, f"{len(invocations)} invocations, differing: {diffs or 'none'}")
    assert not diffs
