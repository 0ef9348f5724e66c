"""Branch and bound over the 0/1 program  max f(x)  s.t.  sum c(a) x_a <= limit.

Bounds are fractional-knapsack relaxations: for count/cost the item values
are fixed; for coverage each remaining item is valued by the voters it would
newly cover, which over-counts overlaps and so stays an upper bound.

Search runs in two passes.  The first finds the best value and the cheapest
cost reaching it.  The second walks item ids from the top, trying to leave
each item out first, so the first budget it meets with that value and cost
is the one with the smallest bitmask, i.e. the canonical winner.
"""

from __future__ import annotations

import sys

from apbudget.core import Scenario
from apbudget.errors import ResourceCapError, UnsupportedPairingError
from apbudget.satisfaction import CostApproved, CountApproved, CoverIndicator, resolve
from apbudget.solvers.greedy import solve_greedy, solve_prop_greedy
from apbudget.solvers.result import DEFAULT_CONFIG, SolveResult, SolverConfig


def _fractional(entries, capacity: int) -> int:
    """Floor of the fractional knapsack optimum; entries are (value, cost) sorted by ratio."""
    total = 0
    for v, c in entries:
        if c <= capacity:
            total += v
            capacity -= c
        else:
            return total + v * capacity // c
    return total


def _undominated_cover_items(s: Scenario, items: list[int]) -> list[int]:
    """Drop item j when some i covers a superset of j's voters at no higher cost.

    With equal costs only a lower-id dominator counts, which keeps the
    canonical optimum intact.
    """
    keep = []
    for j in items:
        aj, cj = s.approver_masks[j], s.costs[j]
        dominated = False
        for i in items:
            if i == j:
                continue
            ai, ci = s.approver_masks[i], s.costs[i]
            if aj & ~ai == 0 and ci <= cj and (ci < cj or i < j):
                dominated = True
                break
        if not dominated:
            keep.append(j)
    return keep


class _Search:
    def __init__(self, s: Scenario, f, config: SolverConfig):
        self.s = s
        self.cover = isinstance(f, CoverIndicator)
        self.node_cap = config.bnb_node_cap
        self.nodes = 0
        items = [a for a in range(s.m) if s.costs[a] <= s.limit and s.support[a] > 0]
        if self.cover:
            items = _undominated_cover_items(s, items)
            self.value = {a: s.support[a] for a in items}
        elif isinstance(f, CostApproved):
            self.value = {a: s.costs[a] * s.support[a] for a in items}
        else:
            self.value = {a: s.support[a] for a in items}
        self.items = items

    def _tick(self):
        self.nodes += 1
        if self.node_cap is not None and self.nodes > self.node_cap:
            raise ResourceCapError(f"branch and bound exceeded {self.node_cap} nodes")

    def gain(self, a: int, covered: int) -> int:
        if self.cover:
            return (self.s.approver_masks[a] & ~covered).bit_count()
        return self.value[a]

    def bound(self, pool, covered: int, capacity: int) -> int:
        """Upper bound on the extra value obtainable from ``pool`` within ``capacity``."""
        if capacity < 0:
            return -1
        costs = self.s.costs
        if not self.cover:
            # pool is pre-sorted by ratio
            return _fractional(((self.value[a], costs[a]) for a in pool), capacity)
        entries = []
        reach = 0
        for a in pool:
            g = (self.s.approver_masks[a] & ~covered).bit_count()
            if g and costs[a] <= capacity:
                entries.append((g, costs[a]))
                reach |= self.s.approver_masks[a]
        if not entries:
            return 0
        entries.sort(key=lambda e: e[0] / e[1], reverse=True)
        return min(_fractional(entries, capacity), (reach & ~covered).bit_count())

    # -- pass 1: best value, then cheapest cost --------------------------------
    def optimise(self, seeds: list[tuple[int, int, int]]):
        s = self.s
        costs = s.costs
        order = sorted(self.items, key=lambda a: (-self.value[a] / costs[a], a))
        self.order = order
        best_v, best_c = 0, 0
        for v, c, _ in seeds:
            if v > best_v or (v == best_v and c < best_c):
                best_v, best_c = v, c
        best = [best_v, best_c]

        def dfs(k: int, cost: int, value: int, covered: int):
            self._tick()
            if value > best[0] or (value == best[0] and cost < best[1]):
                best[0], best[1] = value, cost
            if k == len(order):
                return
            pool = order[k:]
            promising = value + self.bound(pool, covered, s.limit - cost) > best[0]
            if not promising and best[1] - 1 - cost >= 0:
                promising = value + self.bound(pool, covered, best[1] - 1 - cost) >= best[0]
            if not promising:
                return
            a = order[k]
            g = self.gain(a, covered)
            if g and cost + costs[a] <= s.limit:
                dfs(k + 1, cost + costs[a], value + g, covered | s.approver_masks[a])
            dfs(k + 1, cost, value, covered)

        dfs(0, 0, 0, 0)
        return best[0], best[1]

    # -- pass 2: smallest bitmask with that value and cost --------------------
    def canonical(self, target_v: int, target_c: int) -> int:
        s = self.s
        costs = s.costs
        desc = sorted(self.items, reverse=True)
        if self.cover:
            pools = [desc[k:] for k in range(len(desc) + 1)]
        else:
            pools = []
            for k in range(len(desc) + 1):
                allowed = set(desc[k:])
                pools.append([a for a in self.order if a in allowed])

        def find(k: int, mask: int, cost: int, value: int, covered: int):
            self._tick()
            if value >= target_v:
                return mask
            if k == len(desc):
                return None
            if value + self.bound(pools[k], covered, target_c - cost) < target_v:
                return None
            found = find(k + 1, mask, cost, value, covered)
            if found is not None:
                return found
            a = desc[k]
            g = self.gain(a, covered)
            if g and cost + costs[a] <= target_c:
                return find(k + 1, mask | 1 << a, cost + costs[a], value + g, covered | s.approver_masks[a])
            return None

        found = find(0, 0, 0, 0, 0)
        assert found is not None, "canonical pass failed to reach the optimum"
        return found


def solve_branch_and_bound(s: Scenario, fn, config: SolverConfig = DEFAULT_CONFIG) -> SolveResult:
    f = resolve(fn)
    if not isinstance(f, (CountApproved, CostApproved, CoverIndicator)):
        raise UnsupportedPairingError(f"branch and bound has no bound for {f.name!r}")
    search = _Search(s, f, config)
    if not search.items:
        return SolveResult.from_mask(s, 0, 0)
    seeds = []
    for run in (solve_greedy, solve_prop_greedy):
        r = run(s, f, positive_gain_only=True)
        seeds.append((r.value, r.budget.total_cost, r.budget.mask))
    depth = 2 * (len(search.items) + s.n) + 50
    if sys.getrecursionlimit() < depth:
        sys.setrecursionlimit(depth)
    if search.cover:
        mask = _CoverSearch(s, search.items, config.bnb_node_cap).solve([m for _, _, m in seeds])
        return SolveResult.from_mask(s, mask, f.total(s, mask))
    best_v, best_c = search.optimise(seeds)
    mask = search.canonical(best_v, best_c) if best_v > 0 else 0
    return SolveResult.from_mask(s, mask, f.total(s, mask))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _CoverSearch:
    """Branch on voters for the coverage rule.

    At each node an uncovered voter ``v`` with the fewest usable items is
    picked; branch ``i`` funds the ``i``-th of those items and bans the
    earlier ones, and a last branch gives ``v`` up by banning all of them.
    The bound charges every uncovered voter the cheapest price
    ``c(a) / (#uncovered voters of a)`` over items ``a`` covering it: covering
    any ``k`` more voters costs at least the ``k`` smallest prices.
    """

    _SLACK = 1e-9

    def __init__(self, s: Scenario, items: list[int], node_cap: int | None):
        self.s = s
        self.ids = items
        self.cost = [s.costs[a] for a in items]
        self.amask = [s.approver_masks[a] for a in items]
        self.node_cap = node_cap
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.node_cap is not None and self.nodes > self.node_cap:
            raise ResourceCapError(f"branch and bound exceeded {self.node_cap} nodes")

    def _state(self, covered: int, avail: int, residual: int):
        """Prune ``avail`` at a node and price the coverable voters.

        Items that are unaffordable, cover nothing new, or are dominated (a
        kept item covers a superset of their fresh voters for no more money)
        are dropped for the whole subtree: any completion using them can swap
        in the dominating item.
        """
        cost, amask = self.cost, self.amask
        useful = []
        for i in _bits(avail):
            if cost[i] <= residual:
                fresh = amask[i] & ~covered
                if fresh:
                    useful.append((cost[i], -fresh.bit_count(), i, fresh))
        # cheaper / larger / lower id first, so a dominator precedes what it dominates
        useful.sort()
        kept = []
        for c, _, i, fresh in useful:
            if not any(f | fresh == f for _, _, _, f in kept):
                kept.append((c, _, i, fresh))
        best: dict[int, float] = {}
        cands: dict[int, list] = {}
        pruned = 0
        ratios = []
        for c, neg, i, fresh in kept:
            pruned |= 1 << i
            g = -neg
            price = c / g
            ratios.append((price, c, g))
            for v in _bits(fresh):
                if price < best.get(v, float("inf")):
                    best[v] = price
                cands.setdefault(v, []).append((price, i))
        ratios.sort()
        return pruned, sorted(best.values()), ratios, cands

    @classmethod
    def _max_extra(cls, prices: list[float], ratios, capacity: int) -> int:
        """Upper bound on voters newly coverable within ``capacity``.

        The minimum of two relaxations: the ``k`` cheapest per-voter prices
        must fit, and a fractional knapsack over fresh-voter counts.
        """
        tol = cls._SLACK * (1 + capacity)
        total = 0.0
        k = 0
        for p in prices:
            total += p
            if total > capacity + tol:
                break
            k += 1
        room = capacity
        frac = 0.0
        for _, c, g in ratios:
            if c <= room:
                room -= c
                frac += g
            else:
                frac += g * room / c
                break
        return min(k, int(frac + 1e-9))

    def _branches(self, cands):
        v = min(cands, key=lambda u: (len(cands[u]), u))
        return v, [i for _, i in sorted(cands[v])]

    def optimise(self, start: tuple[int, int, int]):
        """Return (value, cost, mask of local indices) of the best value / cheapest solution."""
        limit = self.s.limit
        inc = list(start)

        def node(covered: int, avail: int, cost: int, chosen: int):
            self._tick()
            value = covered.bit_count()
            if value > inc[0] or (value == inc[0] and cost < inc[1]):
                inc[0], inc[1], inc[2] = value, cost, chosen
            avail, prices, ratios, cands = self._state(covered, avail, limit - cost)
            if not cands:
                return
            promising = value + self._max_extra(prices, ratios, limit - cost) > inc[0]
            if not promising and inc[1] - 1 - cost >= 0:
                promising = value + self._max_extra(prices, ratios, inc[1] - 1 - cost) >= inc[0]
            if not promising:
                return
            v, order = self._branches(cands)
            banned = 0
            for i in order:
                node(covered | self.amask[i], avail & ~banned & ~(1 << i), cost + self.cost[i], chosen | 1 << i)
                banned |= 1 << i
            node(covered, avail & ~banned, cost, chosen)

        full = (1 << len(self.ids)) - 1
        node(0, full, 0, 0)
        return inc[0], inc[1], inc[2]

    def feasible(self, forced: int, avail: int, target_v: int, target_c: int):
        """Some solution containing ``forced``, drawing the rest from ``avail``, reaching
        ``target_v`` within cost ``target_c``; returns its local mask or None."""
        covered = 0
        cost = 0
        for i in _bits(forced):
            covered |= self.amask[i]
            cost += self.cost[i]

        def node(covered: int, avail: int, cost: int, chosen: int):
            self._tick()
            value = covered.bit_count()
            if value >= target_v:
                return chosen
            avail, prices, ratios, cands = self._state(covered, avail, target_c - cost)
            if not cands:
                return None
            if value + self._max_extra(prices, ratios, target_c - cost) < target_v:
                return None
            v, order = self._branches(cands)
            banned = 0
            for i in order:
                found = node(covered | self.amask[i], avail & ~banned & ~(1 << i), cost + self.cost[i], chosen | 1 << i)
                if found is not None:
                    return found
                banned |= 1 << i
            return node(covered, avail & ~banned, cost, chosen)

        if cost > target_c:
            return None
        return node(covered, avail & ~forced, cost, forced)

    def solve(self, seed_masks: list[int]) -> int:
        """Canonical optimum as a bitmask over item ids."""
        local = {a: i for i, a in enumerate(self.ids)}
        start = (0, 0, 0)
        for mask in seed_masks:
            lm = sum(1 << local[a] for a in _bits(mask) if a in local)
            cov = 0
            for i in _bits(lm):
                cov |= self.amask[i]
            v, c = cov.bit_count(), sum(self.cost[i] for i in _bits(lm))
            if c <= self.s.limit and (v > start[0] or (v == start[0] and c < start[1])):
                start = (v, c, lm)
        target_v, target_c, witness = self.optimise(start)
        if target_v == 0:
            return 0
        # local indices ascend with item id; drop the highest ones whenever a witness survives
        forced = 0
        for i in range(len(self.ids) - 1, -1, -1):
            if not witness >> i & 1:
                continue
            below = (1 << i) - 1
            found = self.feasible(forced, below, target_v, target_c)
            if found is None:
                forced |= 1 << i
            else:
                witness = found
        return sum(1 << self.ids[i] for i in _bits(forced))
