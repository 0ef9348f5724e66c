"""50x50 histograms of spent funds and their arctan-normalized grayscale rendering."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from apbudget.core import Budget, Scenario

BINS = 50
SCALE = 0.0005


def bin_of(point: tuple[float, float]) -> tuple[int, int]:
    """Half-open unit-width bins, the top edge clamped into the last bin."""
    return tuple(min(max(int(math.floor(BINS * c)), 0), BINS - 1) for c in point)


@dataclass
class Histogram:
    """Funds per bin, indexed ``[bx, by]``; integer so that sums are order-independent."""

    bins: np.ndarray = field(default_factory=lambda: np.zeros((BINS, BINS), dtype=np.int64))
    total_funds: int = 0

    def accumulate(self, s: Scenario, winner: Budget, positions: Sequence[tuple[float, float]]) -> "Histogram":
        for a in winner.members:
            bx, by = bin_of(positions[a])
            self.bins[bx, by] += s.costs[a]
        self.total_funds += winner.total_cost
        return self

    def merge(self, other: "Histogram") -> "Histogram":
        self.bins += other.bins
        self.total_funds += other.total_funds
        return self

    def render(self) -> np.ndarray:
        """Pixels as uint8 with row 0 at the top (highest y bin)."""
        return render_histogram(self)

    def to_pgm(self) -> bytes:
        return to_pgm(self.render())

    def nonzero_rows(self) -> list[tuple[int, int, int]]:
        xs, ys = np.nonzero(self.bins)
        return [(int(x), int(y), int(self.bins[x, y])) for x, y in zip(xs, ys)]


def accumulate_histogram(h: Histogram, s: Scenario, winner: Budget, positions) -> Histogram:
    return h.accumulate(s, winner, positions)


def brightness(x: float, y: float) -> int:
    """round-half-up of 255 * arctan(x / (SCALE * y)) / (pi / 2); 0 when y is 0."""
    if y <= 0 or x <= 0:
        return 0
    return int(math.floor(255 * math.atan(x / (SCALE * y)) / (math.pi / 2) + 0.5))


def render_histogram(h: Histogram) -> np.ndarray:
    image = np.zeros((BINS, BINS), dtype=np.uint8)
    for bx in range(BINS):
        for by in range(BINS):
            image[BINS - 1 - by, bx] = brightness(int(h.bins[bx, by]), h.total_funds)
    return image


def to_pgm(image: np.ndarray) -> bytes:
    """Plain (P2) PGM, maxval 255, one image row per line."""
    rows = [" ".join(str(int(v)) for v in row) for row in image]
    height, width = image.shape
    return (f"P2\n{width} {height}\n255\n" + "\n".join(rows) + "\n").encode()
