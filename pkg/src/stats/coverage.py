"""
Breadth-first coverage of the semigroup orbit of a point.

Word images are deduplicated on a grid 8x finer in each direction than the
reporting grid (64 fine cells per reported cell); a fine cell already reached at
an earlier depth is not expanded again. The logistic family is binned on
[0, 1] with equal-length intervals instead of sphere cells.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from ..systems.catalog import Family, IfsSystem
from .measure import EqualAreaGrid
from .occupation import ensure_regular_start

REFINEMENT = 8
DEFAULT_BUDGET = 2_000_000
COVERAGE_COLUMNS = ["depth", "visited", "total", "fraction"]


@dataclass
class CoverageReport:
    cells_total: int
    cells_visited: int
    depth_reached: int
    points_generated: int
    truncated: bool = False
    per_depth: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.cells_visited / self.cells_total

    def to_frame(self) -> pd.DataFrame:
        rows = [(depth, visited, self.cells_total, visited / self.cells_total) for depth, visited in self.per_depth]
        return pd.DataFrame(rows, columns=COVERAGE_COLUMNS)

    def summary(self) -> dict:
        return {
            "cells_total": self.cells_total,
            "cells_visited": self.cells_visited,
            "fraction": self.fraction,
            "depth_reached": self.depth_reached,
            "points_generated": self.points_generated,
            "truncated": self.truncated,
        }


class _IntervalBins:
    """Equal-length bins of [0, 1] on the real axis"""

    def __init__(self, count: int):
        self.size = count

    def refined(self, factor: int) -> "_IntervalBins":
        return _IntervalBins(self.size * factor)

    def cells_of(self, nums: np.ndarray, dens: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            x = np.where(dens != 0, (nums / dens).real, np.inf)
        x = np.clip(x, 0.0, 1.0)
        return np.minimum((x * self.size).astype(np.int64), self.size - 1)


def coverage_probe(
    system: IfsSystem, z0, depth: int, cells: int = 1000, budget: int = DEFAULT_BUDGET
) -> CoverageReport:
    point = ensure_regular_start(system, z0)
    if system.family is Family.LOGISTIC:
        grid = _IntervalBins(cells)
    else:
        grid = EqualAreaGrid.for_cells(cells)
    fine = grid.refined(REFINEMENT)

    nums = np.array([point.num], dtype=complex)
    dens = np.array([point.den], dtype=complex)
    visited = np.zeros(grid.size, dtype=bool)
    visited[grid.cells_of(nums, dens)] = True
    seen = np.unique(fine.cells_of(nums, dens))
    generated = 1
    truncated = False
    per_depth = [(0, int(visited.sum()))]

    reached = 0
    for level in range(1, depth + 1):
        if nums.size == 0:
            break
        images = [f.apply_many(nums, dens) for f in system.maps]
        nums = np.concatenate([num for num, _ in images])
        dens = np.concatenate([den for _, den in images])
        generated += nums.size
        visited[grid.cells_of(nums, dens)] = True

        fine_cells = fine.cells_of(nums, dens)
        unique_cells, first = np.unique(fine_cells, return_index=True)
        fresh = ~np.isin(unique_cells, seen)
        keep = first[fresh]
        seen = np.union1d(seen, unique_cells)
        nums, dens = nums[keep], dens[keep]
        if nums.size > budget:
            truncated = True
            nums, dens = nums[:budget], dens[:budget]
            logger.warning(f"Coverage frontier truncated to {budget} points at depth {level}")
        per_depth.append((level, int(visited.sum())))
        reached = level

    report = CoverageReport(grid.size, int(visited.sum()), reached, generated, truncated, per_depth)
    logger.info(f"Coverage {report.cells_visited}/{report.cells_total} cells at depth {reached}")
    return report
