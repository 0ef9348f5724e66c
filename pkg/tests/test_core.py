import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apbudget.core import (
    Budget,
    Item,
    Scenario,
    canonical_tiebreak,
    feasibility_check,
    parse_scenario,
    serialize_scenario,
)
from apbudget.errors import MalformedBudgetError, ScenarioParseError

FOUR_VOTER = "3 4 1\n1 1 1\n0\n0 1\n1 2\n2\n"


@st.composite
def scenarios(draw, max_m=8, max_n=6):
    m = draw(st.integers(0, max_m))
    n = draw(st.integers(0, max_n))
    costs = draw(st.lists(st.integers(1, 50), min_size=m, max_size=m))
    approvals = draw(st.lists(st.sets(st.integers(0, max(m - 1, 0)), max_size=m), min_size=n, max_size=n))
    if m == 0:
        approvals = [set() for _ in approvals]
    limit = draw(st.integers(0, 200))
    return Scenario.build(costs, approvals, limit)


class TestScenario:
    def test_build_and_masks(self):
        s = Scenario.build([1, 2, 3], [[0, 2], [], [1]], 4)
        assert (s.m, s.n) == (3, 3)
        assert s.costs == (1, 2, 3)
        assert s.voter_masks == (0b101, 0, 0b010)
        assert s.approver_masks == (0b001, 0b100, 0b001)
        assert s.support == (1, 1, 1)

    def test_rejects_zero_cost(self):
        with pytest.raises(ValueError):
            Item(0, 0)

    def test_rejects_unknown_approval(self):
        with pytest.raises(ValueError):
            Scenario.build([1], [[1]], 1)

    def test_rejects_sparse_ids(self):
        with pytest.raises(ValueError):
            Scenario((Item(1, 1),), (), 1)

    def test_with_limit_and_costs(self):
        s = Scenario.build([2, 2], [[0, 1]], 2)
        assert s.with_limit(5).limit == 5
        assert s.with_costs([1, 2]).costs == (1, 2)


class TestFeasibility:
    def test_over_limit(self):
        s = Scenario.build([1, 2], [], 2)
        assert not feasibility_check(s, Budget.of(s, [0, 1]))

    def test_at_limit(self):
        s = Scenario.build([1, 2], [], 3)
        assert feasibility_check(s, Budget.of(s, [0, 1]))

    def test_published_costs(self):
        s = Scenario.build([2, 3, 3, 5], [[0, 1, 2, 3]], 6)
        assert feasibility_check(s, Budget.of(s, [1, 2]))

    def test_unknown_item(self):
        s = Scenario.build([1], [], 1)
        with pytest.raises(MalformedBudgetError):
            feasibility_check(s, Budget(frozenset({3}), 1))
        with pytest.raises(MalformedBudgetError):
            Budget.of(s, [5])


class TestTiebreak:
    def test_equal_cost_prefers_smaller_high_ids(self):
        a = Budget(frozenset({0, 2}), 3)
        b = Budget(frozenset({1}), 3)
        assert canonical_tiebreak([a, b]) == b
        assert canonical_tiebreak([b, a]) == b

    def test_singleton(self):
        a = Budget(frozenset({0}), 1)
        assert canonical_tiebreak([a]) == a

    def test_cheaper_first(self):
        assert canonical_tiebreak([Budget(frozenset({1}), 2), Budget(frozenset({0}), 1)]).members == {0}

    def test_empty_list(self):
        with pytest.raises(ValueError):
            canonical_tiebreak([])

    @given(st.lists(st.frozensets(st.integers(0, 6), max_size=4), min_size=1, max_size=6), st.randoms())
    def test_permutation_invariant(self, sets, rnd):
        cands = [Budget(m, 5) for m in sets]
        shuffled = list(cands)
        rnd.shuffle(shuffled)
        assert canonical_tiebreak(cands) == canonical_tiebreak(shuffled)


class TestTextFormat:
    def test_parse_simple(self):
        s = parse_scenario(b"2 1 3\n1 2\n0 1\n")
        assert s.costs == (1, 2) and s.limit == 3
        assert s.voters[0].approved == {0, 1}

    def test_parse_four_voter_instance(self):
        s = parse_scenario(FOUR_VOTER)
        assert [sorted(v.approved) for v in s.voters] == [[0], [0, 1], [1, 2], [2]]

    def test_zero_limit(self):
        assert parse_scenario("1 1 0\n5\n0\n").limit == 0

    def test_no_voters(self):
        s = Scenario.build([3, 4], [], 7)
        assert serialize_scenario(s) == b"2 0 7\n3 4\n"

    def test_single_item_single_voter(self):
        out = serialize_scenario(Scenario.build([5], [[0]], 5))
        assert out.count(b"\n") == 3

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", 1),
            ("2 1\n1 1\n0\n", 1),
            ("2 1 3\n1\n0\n", 2),
            ("2 1 3\n1 0\n0\n", 2),
            ("2 1 3\n1 1\n0 2\n", 3),
            ("2 1 3\n1 1\nx\n", 3),
            ("2 2 3\n1 1\n0\n", 4),
            ("2 1 3\n1 1\n0 0\n", 3),
            ("1 1 3\n1\n0\n9\n", 4),
        ],
    )
    def test_parse_errors_carry_line(self, text, line):
        with pytest.raises(ScenarioParseError) as info:
            parse_scenario(text)
        assert info.value.line == line
        assert f"line {line}" in str(info.value)

    @settings(max_examples=80)
    @given(scenarios())
    def test_round_trip(self, s):
        data = serialize_scenario(s)
        again = parse_scenario(data)
        assert again == s
        assert serialize_scenario(again) == data
