"""
Equal-area binning of the sphere and the empirical Cesaro measure of an orbit.

Bands split the height coordinate H of the stereographic lift into equal
intervals (equal area by Archimedes), sectors split longitude uniformly.
Band 0 holds the south pole, which is the image of z = 0.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd
from loguru import logger

from ..engine.orbit import OrbitEvent, run_orbit
from ..engine.symbols import SymbolStream
from ..exceptions import InvalidParameterError
from ..sphere.point import SpherePoint
from ..systems.catalog import IfsSystem

HISTOGRAM_COLUMNS = ["bin", "lat_lo", "lat_hi", "lon_lo", "lon_hi", "mass"]
DEFAULT_NEAR_RADIUS = 0.2


@dataclass(frozen=True)
class EqualAreaGrid:
    bands: int
    sectors: int

    def __post_init__(self):
        if self.bands < 1 or self.sectors < 1:
            raise InvalidParameterError("Grid needs at least one band and one sector")

    @classmethod
    def for_cells(cls, cells: int) -> "EqualAreaGrid":
        """Grid of about `cells` cells; sectors are rounded, so the size is within bands / 2 of `cells`

        for_cells(1000) is 18 x 56 = 1008 cells. Fractions are always taken over `size`.
        """
        if cells < 1:
            raise InvalidParameterError("Cell count must be positive")
        bands = max(1, round(math.sqrt(cells / math.pi)))
        return cls(bands, max(1, round(cells / bands)))

    @property
    def size(self) -> int:
        return self.bands * self.sectors

    def refined(self, factor: int) -> "EqualAreaGrid":
        return EqualAreaGrid(self.bands * factor, self.sectors * factor)

    def cell_of(self, point: SpherePoint) -> int:
        x, y, h = point.lift()
        return self._index(h, math.atan2(y, x))

    def _index(self, h: float, longitude: float) -> int:
        band = min(int((h + 1.0) / 2.0 * self.bands), self.bands - 1)
        sector = int((longitude + math.pi) / (2.0 * math.pi) * self.sectors) % self.sectors
        return band * self.sectors + sector

    def cells_of(self, nums: np.ndarray, dens: np.ndarray) -> np.ndarray:
        """Vectorised cell index of homogeneous pairs"""
        a = np.abs(nums) ** 2
        b = np.abs(dens) ** 2
        norm = a + b
        cross = nums * np.conj(dens)
        h = (a - b) / norm
        longitude = np.arctan2(2.0 * cross.imag / norm, 2.0 * cross.real / norm)
        band = np.minimum(((h + 1.0) / 2.0 * self.bands).astype(np.int64), self.bands - 1)
        sector = ((longitude + math.pi) / (2.0 * math.pi) * self.sectors).astype(np.int64) % self.sectors
        return band * self.sectors + sector

    def bounds(self, cell: int) -> Tuple[float, float, float, float]:
        """(lat_lo, lat_hi, lon_lo, lon_hi) in radians"""
        band, sector = divmod(cell, self.sectors)
        lat_lo = math.asin(-1.0 + 2.0 * band / self.bands)
        lat_hi = math.asin(min(1.0, -1.0 + 2.0 * (band + 1) / self.bands))
        width = 2.0 * math.pi / self.sectors
        return lat_lo, lat_hi, -math.pi + sector * width, -math.pi + (sector + 1) * width

    def cell_areas(self) -> np.ndarray:
        areas = np.empty(self.size)
        for cell in range(self.size):
            lat_lo, lat_hi, lon_lo, lon_hi = self.bounds(cell)
            areas[cell] = (math.sin(lat_hi) - math.sin(lat_lo)) * (lon_hi - lon_lo)
        return areas


@dataclass
class SphereHistogram:
    grid: EqualAreaGrid
    counts: np.ndarray
    total: int
    near_count: int = 0
    near_radius: float = DEFAULT_NEAR_RADIUS

    @property
    def mass_near_zero(self) -> float:
        return self.near_count / self.total if self.total else 0.0

    def mass(self) -> np.ndarray:
        return self.counts / self.total if self.total else np.zeros_like(self.counts, dtype=float)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        mass = self.mass()
        for cell in range(self.grid.size):
            rows.append((cell, *self.grid.bounds(cell), float(mass[cell])))
        return pd.DataFrame(rows, columns=HISTOGRAM_COLUMNS)

    def summary(self) -> dict:
        return {
            "bands": self.grid.bands,
            "sectors": self.grid.sectors,
            "total": self.total,
            "near_radius": self.near_radius,
            "mass_near_zero": self.mass_near_zero,
            "mass_in_zero_cell": float(self.mass()[self.grid.cell_of(SpherePoint(0.0, 1.0))]),
        }


class HistogramObserver:
    def __init__(self, grid: EqualAreaGrid, burnin: int = 0, near_radius: float = DEFAULT_NEAR_RADIUS):
        self.grid = grid
        self.burnin = burnin
        self.near_radius = near_radius
        self.counts = np.zeros(grid.size, dtype=np.int64)
        self.total = 0
        self.near = 0

    def observe(self, event: OrbitEvent) -> None:
        if event.step < self.burnin:
            return
        self.counts[self.grid.cell_of(event.point)] += 1
        self.total += 1
        if event.point.chordal_to_zero() < self.near_radius:
            self.near += 1

    def merge(self, other: "HistogramObserver") -> "HistogramObserver":
        merged = HistogramObserver(self.grid, self.burnin, self.near_radius)
        merged.counts = self.counts + other.counts
        merged.total = self.total + other.total
        merged.near = self.near + other.near
        return merged

    def histogram(self) -> SphereHistogram:
        return SphereHistogram(self.grid, self.counts.copy(), self.total, self.near, self.near_radius)


def empirical_cesaro_measure(
    system: IfsSystem,
    z0,
    steps: int,
    burnin: int,
    grid: EqualAreaGrid,
    seed: int = 0,
    index: int = 0,
    near_radius: float = DEFAULT_NEAR_RADIUS,
) -> SphereHistogram:
    """Histogram of z_n for burnin <= n < steps"""
    if steps <= burnin:
        raise InvalidParameterError(f"steps ({steps}) must exceed burnin ({burnin})")
    observer = HistogramObserver(grid, burnin, near_radius)
    run_orbit(system, z0, SymbolStream(seed, index, system.p0), steps, (observer,))
    histogram = observer.histogram()
    logger.debug(f"Cesaro measure: mass {histogram.mass_near_zero:.4f} within chordal {near_radius} of 0")
    return histogram
