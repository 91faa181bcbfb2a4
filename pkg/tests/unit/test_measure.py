import math

import numpy as np
import pytest

from src.engine.orbit import OrbitEvent
from src.exceptions import InvalidParameterError
from src.sphere.point import INFINITY, ZERO, SpherePoint
from src.stats.measure import HISTOGRAM_COLUMNS, EqualAreaGrid, HistogramObserver, empirical_cesaro_measure


class TestEqualAreaGrid:
    def test_for_cells(self):
        grid = EqualAreaGrid.for_cells(1000)
        assert (grid.bands, grid.sectors) == (18, 56)
        assert grid.size == 1008

    @pytest.mark.parametrize("cells", [1, 10, 100, 999, 1000, 2500])
    def test_for_cells_size_is_within_half_a_band(self, cells):
        grid = EqualAreaGrid.for_cells(cells)
        assert abs(grid.size - cells) <= grid.bands / 2

    def test_cells_have_equal_area(self):
        grid = EqualAreaGrid.for_cells(300)
        areas = grid.cell_areas()
        assert np.allclose(areas, 4 * math.pi / grid.size)

    def test_poles(self):
        grid = EqualAreaGrid(4, 8)
        assert grid.cell_of(ZERO) // grid.sectors == 0
        assert grid.cell_of(INFINITY) // grid.sectors == 3

    def test_vectorised_matches_scalar(self):
        grid = EqualAreaGrid.for_cells(500)
        rng = np.random.default_rng(0)
        zs = rng.normal(size=500) + 1j * rng.normal(size=500)
        cells = grid.cells_of(zs, np.ones_like(zs))
        assert cells.tolist() == [grid.cell_of(SpherePoint.from_complex(z)) for z in zs]

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            EqualAreaGrid(0, 3)
        with pytest.raises(InvalidParameterError):
            EqualAreaGrid.for_cells(0)


class TestCesaroMeasure:
    def test_fixed_point_start(self, critical):
        histogram = empirical_cesaro_measure(critical, 0, 2000, 100, EqualAreaGrid.for_cells(100))
        assert histogram.total == 1900
        assert histogram.mass_near_zero == 1.0
        assert histogram.summary()["mass_in_zero_cell"] == 1.0

    def test_mass_sums_to_one(self, critical):
        histogram = empirical_cesaro_measure(critical, 0.3, 3000, 0, EqualAreaGrid.for_cells(100), seed=2)
        frame = histogram.to_frame()
        assert list(frame.columns) == HISTOGRAM_COLUMNS
        assert frame["mass"].sum() == pytest.approx(1.0)

    def test_burnin_must_be_shorter(self, critical):
        with pytest.raises(InvalidParameterError):
            empirical_cesaro_measure(critical, 0.3, 100, 100, EqualAreaGrid.for_cells(10))

    def test_observer_merge(self):
        grid = EqualAreaGrid.for_cells(10)
        left, right = HistogramObserver(grid), HistogramObserver(grid)
        left.observe(OrbitEvent(0, 0, ZERO, 0, -math.inf))
        right.observe(OrbitEvent(0, 0, INFINITY, 2, -math.inf))
        merged = left.merge(right).histogram()
        assert merged.total == 2
        assert merged.mass_near_zero == 0.5

    @pytest.mark.slow
    def test_critical_mass_near_zero(self, critical):
        histogram = empirical_cesaro_measure(critical, 0.3, 1_000_000, 1000, EqualAreaGrid.for_cells(1000))
        assert histogram.mass_near_zero >= 0.8

    @pytest.mark.slow
    def test_mobius_mass_near_zero(self, mobius):
        histogram = empirical_cesaro_measure(mobius, 0.3, 1_000_000, 1000, EqualAreaGrid.for_cells(1000))
        assert histogram.mass_near_zero >= 0.5
