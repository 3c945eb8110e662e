"""Correlation between per-example metric vectors.

Pearson and Spearman both return None (Undefined) instead of a number when
either input has zero variance; a constant vector has no linear or rank
relationship to anything, and downstream tables render the case as NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class MetricVector:
    """Named, id-aligned vector of per-example metric values."""

    metric_id: str
    example_ids: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.example_ids) != len(self.values):
            raise ValueError(
                f"{self.metric_id}: {len(self.example_ids)} ids but "
                f"{len(self.values)} values"
            )
        if len(set(self.example_ids)) != len(self.example_ids):
            raise ValueError(f"{self.metric_id}: duplicate example ids")

    def __len__(self) -> int:
        return len(self.values)


def _check_aligned(x: MetricVector, y: MetricVector) -> None:
    if x.example_ids != y.example_ids:
        raise ValueError(
            f"misaligned vectors: {x.metric_id} vs {y.metric_id} "
            "(ids differ or are ordered differently)"
        )
    if len(x) < 2:
        raise ValueError("correlation needs at least two observations")


def _pearson_values(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [v - mean_x for v in xs]
    dy = [v - mean_y for v in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        return None
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))


def pearson(x: MetricVector, y: MetricVector) -> Optional[float]:
    """Sample Pearson coefficient, or None when a vector is constant."""
    _check_aligned(x, y)
    return _pearson_values(x.values, y.values)


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values all receive the mean of their rank span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman(x: MetricVector, y: MetricVector) -> Optional[float]:
    """Pearson over average ranks, or None on zero rank variance."""
    _check_aligned(x, y)
    return _pearson_values(average_ranks(x.values), average_ranks(y.values))
