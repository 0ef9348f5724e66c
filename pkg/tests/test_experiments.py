import math

import numpy as np
import pytest

from apbudget.core import Budget, Scenario, serialize_scenario
from apbudget.experiments.generators import (
    Disc,
    ItemGroup,
    PointConfig,
    UnitSquare,
    ClosestK,
    build_scenario_exp1,
    build_scenario_exp2,
    build_scenario_exp3,
    exp1_config,
    exp2_config,
    exp3_config,
    sample_disc,
)
from apbudget.experiments.histogram import Histogram, bin_of, brightness, render_histogram, to_pgm
from apbudget.experiments.rng import Rng, derive_seed, splitmix64
from apbudget.experiments.runner import EXPERIMENT_RULES, run_experiment
from apbudget.solvers import solve


def _rules(*names):
    return [r for r in EXPERIMENT_RULES if r.name in names]


class TestRng:
    def test_reference_values(self):
        # splitmix64 reference output for state 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF
        # frozen from an independent numpy uint64 implementation
        r = Rng(1)
        assert [r.next_u64() for _ in range(3)] == [0x4B46A55DF3611B9B, 0xD7E1F1410E763EF4, 0x5F14EC66975F9B06]

    def test_streams_repeat(self):
        a, b = Rng(42), Rng(42)
        assert [a.next_u64() for _ in range(50)] == [b.next_u64() for _ in range(50)]
        assert Rng(42).next_u64() != Rng(43).next_u64()

    def test_random_range(self):
        r = Rng(5)
        xs = [r.random() for _ in range(2000)]
        assert 0 <= min(xs) and max(xs) < 1
        assert abs(sum(xs) / len(xs) - 0.5) < 0.03

    def test_randint_bounds(self):
        r = Rng(9)
        vals = {r.randint(3, 6) for _ in range(500)}
        assert vals == {3, 4, 5, 6}
        with pytest.raises(ValueError):
            r.randint(2, 1)

    def test_sample_distinct(self):
        picked = Rng(2).sample(range(10), 4)
        assert len(set(picked)) == 4

    def test_derive_seed_depends_on_keys(self):
        assert derive_seed(1, 2) != derive_seed(1, 3)
        assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)


class TestGenerators:
    def test_disc_radius_zero(self):
        assert sample_disc(Rng(1), (0.25, 0.75), 0.0) == (0.25, 0.75)

    def test_disc_mean_and_support(self):
        rng = Rng(3)
        pts = np.array([sample_disc(rng, (0.5, 0.5), 0.3) for _ in range(100_000)])
        assert np.all(np.hypot(pts[:, 0] - 0.5, pts[:, 1] - 0.5) <= 0.3 + 1e-12)
        assert np.all(np.abs(pts.mean(axis=0) - 0.5) < 0.01)

    def test_disc_outside_square_rejected(self):
        with pytest.raises(ValueError):
            Disc((0.1, 0.5), 0.2)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PointConfig(2, UnitSquare(), (ItemGroup("g", 3, UnitSquare(), 1),), 5, ClosestK(4))
        with pytest.raises(ValueError):
            exp3_config(0.5, 10)
        with pytest.raises(ValueError):
            exp2_config(101)

    def test_exp1_closest_ten(self):
        sample = build_scenario_exp1(Rng(1), 30)
        s = sample.scenario
        assert (s.n, s.m, s.limit) == (50, 100, 1000)
        assert all(len(v.approved) == 10 for v in s.voters)
        assert s.costs[:50] == (10,) * 50 and s.costs[50:] == (30,) * 50

    def test_exp1_equal_costs(self):
        s = build_scenario_exp1(Rng(1), 10).scenario
        assert set(s.costs) == {10}

    def test_exp1_repeatable(self):
        a = build_scenario_exp1(Rng(77), 90).scenario
        b = build_scenario_exp1(Rng(77), 90).scenario
        assert serialize_scenario(a) == serialize_scenario(b)

    def test_exp2_reach(self):
        s0 = build_scenario_exp2(Rng(4), 0).scenario
        assert all(k == 0 for k in s0.support[50:])
        assert all(k == 5 for k in s0.support[:50])
        s100 = build_scenario_exp2(Rng(4), 100).scenario
        assert all(k == 100 for k in s100.support[50:])
        assert (s100.limit, s100.costs[60]) == (200, 100)

    def test_exp3_probability_extremes(self):
        s0 = build_scenario_exp3(Rng(6), 0.0, 20).scenario
        assert all(k == 0 for k in s0.support[:5])
        s1 = build_scenario_exp3(Rng(6), 1.0, 20).scenario
        assert all(k == 20 for k in s1.support[:5])
        assert set(s1.costs) == {5}

    def test_exp3_local_radius(self):
        sample = build_scenario_exp3(Rng(8), 0.5, 30)
        for v, vp in enumerate(sample.voter_points):
            for a in range(5, 35):
                ip = sample.item_points[a]
                near = math.dist(vp, ip) <= 0.2
                assert (a in sample.scenario.voters[v].approved) == near


class TestHistogram:
    def test_empty_winner(self):
        s = Scenario.build([10], [], 10)
        h = Histogram().accumulate(s, Budget.empty(), [(0.5, 0.5)])
        assert h.total_funds == 0 and not h.bins.any()

    def test_bin_lookup(self):
        assert bin_of((0.31, 0.5)) == (15, 25)
        assert bin_of((1.0, 1.0)) == (49, 49)
        assert bin_of((0.0, 0.0)) == (0, 0)

    def test_accumulate(self):
        s = Scenario.build([10, 7], [], 20)
        h = Histogram().accumulate(s, Budget.of(s, [0, 1]), [(0.31, 0.5), (1.0, 1.0)])
        assert h.bins[15, 25] == 10 and h.bins[49, 49] == 7
        assert h.total_funds == 17 == h.bins.sum()

    def test_brightness(self):
        assert brightness(0, 100) == 0
        assert brightness(0.05, 100) == 128
        assert brightness(1e12, 1) == 255
        assert brightness(5, 0) == 0
        values = [brightness(x, 1000) for x in range(0, 50)]
        assert values == sorted(values)

    def test_render_orientation_and_black(self):
        h = Histogram()
        assert not render_histogram(h).any()
        h.bins[3, 49] = 5
        h.total_funds = 5
        img = render_histogram(h)
        assert img[0, 3] == 255
        assert img.sum() == img[0, 3]

    def test_pgm_format(self):
        data = to_pgm(np.zeros((50, 50), dtype=np.uint8)).decode()
        lines = data.splitlines()
        assert lines[:3] == ["P2", "50 50", "255"]
        assert len(lines) == 53 and all(len(l.split()) == 50 for l in lines[3:])


class TestRunner:
    def test_single_repetition_split(self):
        cfg = exp3_config(0.5, 20)
        res = run_experiment(cfg, _rules("max-count"), repetitions=1, seed=3)
        totals = res.totals["max-count"]
        assert sum(totals.group_funds.values()) == totals.histogram.total_funds <= 20

    def test_threads_do_not_matter(self):
        cfg = exp3_config(0.25, 30)
        a = run_experiment(cfg, EXPERIMENT_RULES, repetitions=4, seed=9)
        b = run_experiment(cfg, EXPERIMENT_RULES, repetitions=4, seed=9, threads=3)
        for name in a.totals:
            assert np.array_equal(a.totals[name].histogram.bins, b.totals[name].histogram.bins)
            assert a.totals[name].group_funds == b.totals[name].group_funds

    def test_limit_respected(self):
        cfg = exp2_config(10)
        res = run_experiment(cfg, EXPERIMENT_RULES, repetitions=2, seed=1)
        for t in res.totals.values():
            assert t.histogram.total_funds <= 2 * 200

    def test_exp2_no_reach_no_expensive_funds(self):
        cfg = exp2_config(0)
        res = run_experiment(cfg, EXPERIMENT_RULES, repetitions=5, seed=1)
        for rule in res.rules:
            assert res.funds(rule.name, "expensive") == 0

    def test_exp3_no_global_approvals(self):
        res = run_experiment(exp3_config(0.0, 20), EXPERIMENT_RULES, repetitions=5, seed=1)
        for rule in res.rules:
            assert res.funds(rule.name, "global") == 0

    def test_exp3_full_global_approval(self):
        res = run_experiment(exp3_config(1.0, 20), _rules("max-count", "max-cover", "max-cost"), 20, seed=1)
        g = {name: res.funds(name, "global") for name in ("max-count", "max-cover", "max-cost")}
        assert g["max-cost"] == max(g.values())

    def test_zero_gain_items_skipped(self):
        s = build_scenario_exp2(Rng(derive_seed(1, 0)), 0).scenario
        for rule in _rules("greedy-count", "propgreedy-cover"):
            assert all(a < 50 for a in solve(s, rule).budget.members)

    def test_rejects_zero_repetitions(self):
        with pytest.raises(ValueError):
            run_experiment(exp3_config(0.5, 20), repetitions=0)

    @pytest.mark.slow
    def test_exp1_count_expensive_funds_non_increasing(self):
        funds = []
        for x in (10, 30, 90, 190):
            res = run_experiment(exp1_config(x), _rules("max-count"), repetitions=20, seed=1)
            funds.append(res.funds("max-count", "expensive"))
        assert funds == sorted(funds, reverse=True), funds
