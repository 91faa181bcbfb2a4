import cmath
import math

import pytest

from src.exceptions import InvalidParameterError
from src.stats.circle import CANDIDATE_SETS, CURVE_COLUMNS, f1_on_w, invariant_candidate_check, unit_circle_curve

LAMBDA_GRID = [
    r * cmath.exp(1j * (0.37 + 2 * math.pi * k / 10)) for r in (0.13, 0.27, 0.41, 0.55, 0.69, 0.83, 0.97, 1.3, 2.1, 3.7)
    for k in range(10)
]


class TestCurve:
    def test_base_point_is_fixed(self):
        curve = unit_circle_curve(0.5j)
        first = curve.frame.iloc[0]
        assert first["theta"] == 0.0
        assert first["abs"] == 1.0
        assert list(curve.frame.columns) == CURVE_COLUMNS
        assert len(curve.frame) == 1440

    @pytest.mark.parametrize("lam", [0.5, 0.5 + math.sqrt(3) / 2 * 1j])
    def test_named_parameters(self, lam):
        assert unit_circle_curve(lam).crossings <= 3

    @pytest.mark.parametrize("lam", LAMBDA_GRID)
    def test_grid(self, lam):
        assert unit_circle_curve(lam, samples=720).crossings <= 3

    def test_sample_floor(self):
        with pytest.raises(InvalidParameterError):
            unit_circle_curve(0.5j, samples=100)


class TestInvariantCandidates:
    def test_f1_fixes_one(self):
        assert f1_on_w(0.3 + 0.2j, 1.0) == 1.0

    def test_minus_one_goes_to_one_minus_two_lambda(self):
        assert f1_on_w(0.25j, -1.0) == pytest.approx(1 - 0.5j)

    @pytest.mark.parametrize("lam", LAMBDA_GRID)
    def test_no_candidate_is_invariant(self, lam):
        rows = invariant_candidate_check(lam)
        assert len(rows) == len(CANDIDATE_SETS) == 11
        assert not any(row["invariant"] for row in rows)

    def test_escaping_elements_reported(self):
        rows = {row["set"]: row for row in invariant_candidate_check(0.5j)}
        assert rows["{-1}"]["escaping_elements"] == [[-1.0, 0.0]]

    def test_excluded_lambda(self):
        with pytest.raises(InvalidParameterError):
            invariant_candidate_check(1.0)
