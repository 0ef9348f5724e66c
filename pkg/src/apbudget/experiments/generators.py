"""Two-dimensional Euclidean scenario generators.

Draw order for one scenario: all voter points, then item points group by
group, then any random approvals (voter-major).  Points inside a disc are
drawn by rejection from the disc's bounding square.  Distance ties are broken
by the lower id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from apbudget.core import Scenario
from apbudget.experiments.rng import Rng

Point = tuple[float, float]


@dataclass(frozen=True)
class Disc:
    center: Point
    radius: float

    def __post_init__(self):
        (cx, cy), r = self.center, self.radius
        if r < 0 or cx - r < 0 or cy - r < 0 or cx + r > 1 or cy + r > 1:
            raise ValueError(f"disc {self} does not lie within the unit square")


@dataclass(frozen=True)
class UnitSquare:
    pass


Region = Union[Disc, UnitSquare]


@dataclass(frozen=True)
class ItemGroup:
    name: str
    count: int
    region: Region
    cost: int


@dataclass(frozen=True)
class ClosestK:
    """Each voter approves her k nearest items."""

    k: int


@dataclass(frozen=True)
class ItemClosestVoters:
    """Each item of a group is approved by the k nearest voters; k given per group name."""

    k: dict[str, int]


@dataclass(frozen=True)
class GlobalLocal:
    """Voters approve each global item with probability p and each local item within a radius."""

    p: float
    local_radius: float
    global_group: str = "global"
    local_group: str = "local"


@dataclass(frozen=True)
class PointConfig:
    voter_count: int
    voter_region: Region
    item_groups: tuple[ItemGroup, ...]
    limit: int
    approval_model: Union[ClosestK, ItemClosestVoters, GlobalLocal]

    def __post_init__(self):
        if self.voter_count < 0 or any(g.count < 0 for g in self.item_groups):
            raise ValueError("counts must be non-negative")
        m = sum(g.count for g in self.item_groups)
        model = self.approval_model
        if isinstance(model, ClosestK) and not 0 <= model.k <= m:
            raise ValueError(f"k={model.k} exceeds the {m} items")
        if isinstance(model, ItemClosestVoters):
            for name, k in model.k.items():
                if not 0 <= k <= self.voter_count:
                    raise ValueError(f"group {name}: k={k} exceeds the {self.voter_count} voters")
        if isinstance(model, GlobalLocal) and not 0 <= model.p <= 1:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class PointSample:
    scenario: Scenario
    voter_points: tuple[Point, ...]
    item_points: tuple[Point, ...]
    item_groups: tuple[str, ...] = field(default=())


def sample_disc(rng: Rng, center: Point, radius: float) -> Point:
    cx, cy = center
    if radius == 0:
        return (cx, cy)
    r2 = radius * radius
    while True:
        dx = (2.0 * rng.random() - 1.0) * radius
        dy = (2.0 * rng.random() - 1.0) * radius
        if dx * dx + dy * dy <= r2:
            return (cx + dx, cy + dy)


def sample_region(rng: Rng, region: Region) -> Point:
    if isinstance(region, Disc):
        return sample_disc(rng, region.center, region.radius)
    return (rng.random(), rng.random())


def _d2(p: Point, q: Point) -> float:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def build_scenario(config: PointConfig, rng: Rng) -> PointSample:
    voters = tuple(sample_region(rng, config.voter_region) for _ in range(config.voter_count))
    items: list[Point] = []
    labels: list[str] = []
    costs: list[int] = []
    for group in config.item_groups:
        for _ in range(group.count):
            items.append(sample_region(rng, group.region))
            labels.append(group.name)
            costs.append(group.cost)

    approvals: list[set[int]] = [set() for _ in voters]
    model = config.approval_model
    if isinstance(model, ClosestK):
        for v, vp in enumerate(voters):
            ranked = sorted(range(len(items)), key=lambda a: (_d2(vp, items[a]), a))
            approvals[v].update(ranked[: model.k])
    elif isinstance(model, ItemClosestVoters):
        for a, ip in enumerate(items):
            k = model.k.get(labels[a], 0)
            ranked = sorted(range(len(voters)), key=lambda v: (_d2(voters[v], ip), v))
            for v in ranked[:k]:
                approvals[v].add(a)
    elif isinstance(model, GlobalLocal):
        r2 = model.local_radius**2
        for v, vp in enumerate(voters):
            for a, ip in enumerate(items):
                if labels[a] == model.global_group:
                    if rng.bernoulli(model.p):
                        approvals[v].add(a)
                elif labels[a] == model.local_group and _d2(vp, ip) <= r2:
                    approvals[v].add(a)
    else:
        raise TypeError(f"unknown approval model {model!r}")

    scenario = Scenario.build(costs, approvals, config.limit)
    return PointSample(scenario, voters, tuple(items), tuple(labels))


# -- the three experiment settings ------------------------------------------

CENTER_DISC = Disc((0.5, 0.5), 0.3)
CHEAP_DISC = Disc((0.3, 0.5), 0.2)
EXPENSIVE_DISC = Disc((0.7, 0.5), 0.2)


def exp1_config(expensive_cost: int) -> PointConfig:
    if expensive_cost < 1:
        raise ValueError("expensive item cost must be >= 1")
    return PointConfig(
        voter_count=50,
        voter_region=CENTER_DISC,
        item_groups=(
            ItemGroup("cheap", 50, CHEAP_DISC, 10),
            ItemGroup("expensive", 50, EXPENSIVE_DISC, expensive_cost),
        ),
        limit=1000,
        approval_model=ClosestK(10),
    )


def exp2_config(expensive_reach: int) -> PointConfig:
    if not 0 <= expensive_reach <= 100:
        raise ValueError("expensive reach must lie in [0, 100]")
    return PointConfig(
        voter_count=100,
        voter_region=CENTER_DISC,
        item_groups=(
            ItemGroup("cheap", 50, CHEAP_DISC, 10),
            ItemGroup("expensive", 50, EXPENSIVE_DISC, 100),
        ),
        limit=200,
        approval_model=ItemClosestVoters({"cheap": 5, "expensive": expensive_reach}),
    )


def exp3_config(p: float, limit: int) -> PointConfig:
    if not 20 <= limit <= 50:
        raise ValueError("limit must lie in [20, 50]")
    return PointConfig(
        voter_count=20,
        voter_region=UnitSquare(),
        item_groups=(
            ItemGroup("global", 5, UnitSquare(), 5),
            ItemGroup("local", 30, UnitSquare(), 5),
        ),
        limit=limit,
        approval_model=GlobalLocal(p, 0.2),
    )


def build_scenario_exp1(rng: Rng, expensive_cost: int) -> PointSample:
    return build_scenario(exp1_config(expensive_cost), rng)


def build_scenario_exp2(rng: Rng, expensive_reach: int) -> PointSample:
    return build_scenario(exp2_config(expensive_reach), rng)


def build_scenario_exp3(rng: Rng, p: float, limit: int) -> PointSample:
    return build_scenario(exp3_config(p, limit), rng)
