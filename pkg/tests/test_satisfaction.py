import pytest

from apbudget.core import ApprovalSet, Budget, Scenario
from apbudget.satisfaction import (
    BUILTIN,
    CallableSatisfaction,
    SatisfactionFnId,
    evaluate,
    resolve,
    total_satisfaction,
)

ALL = list(SatisfactionFnId)


def test_published_example_count_and_cover():
    s = Scenario.build([1, 1, 1], [[0, 1]], 3)
    b = Budget.of(s, [1, 2])
    v = s.voters[0]
    assert evaluate("count", v, b, s) == 1
    assert evaluate("cover", v, b, s) == 1


@pytest.mark.parametrize("fn", ALL)
def test_empty_approval_set_is_zero(fn):
    s = Scenario.build([1, 2], [[]], 3)
    assert evaluate(fn, ApprovalSet(0), Budget.of(s, [0, 1]), s) == 0


def test_min_cost_versus_cost():
    s = Scenario.build([1, 2], [[0, 1]], 3)
    b = Budget.of(s, [0, 1])
    assert evaluate("mincost", s.voters[0], b, s) == 1
    assert evaluate("cost", s.voters[0], b, s) == 3


@pytest.mark.parametrize("fn", ALL)
def test_empty_budget(fn):
    s = Scenario.build([1, 2, 3], [[0, 1], [2]], 6)
    assert total_satisfaction(fn, s, Budget.empty()) == 0


def test_totals_on_published_instances():
    s = Scenario.build([1, 1, 1], [[0], [0, 1], [1, 2], [2]], 2)
    assert total_satisfaction("cover", s, Budget.of(s, [0, 2])) == 4
    t = Scenario.build([2, 3, 3, 5], [[0, 1, 2, 3]], 6)
    assert total_satisfaction("cost", t, Budget.of(t, [1, 2])) == 6


def test_monotonicity_flags():
    assert resolve("count").superset_monotone
    assert resolve("cover").superset_monotone
    assert resolve("cost").superset_monotone
    assert not resolve("mincost").superset_monotone


def test_marginals_match_totals():
    s = Scenario.build([1, 2, 3, 4], [[0, 1], [1, 2, 3], [3]], 10)
    for f in BUILTIN.values():
        base = 0b0010
        gains = f.marginals(s, base, [0, 2, 3])
        assert gains == [f.total(s, base | 1 << a) - f.total(s, base) for a in (0, 2, 3)]


def test_callable_extension():
    f = CallableSatisfaction("double", lambda appr, funded, costs: 2 * len(funded), True)
    s = Scenario.build([1, 1], [[0, 1]], 2)
    assert f.total(s, 0b11) == 4


def test_callable_rejects_negative():
    f = CallableSatisfaction("neg", lambda appr, funded, costs: -1, True)
    s = Scenario.build([1], [[0]], 1)
    with pytest.raises(ValueError):
        f.total(s, 1)


def test_unknown_name():
    with pytest.raises(ValueError):
        resolve("happiness")
