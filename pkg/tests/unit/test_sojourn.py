from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.exceptions import DegenerateOrbitError, InvalidParameterError
from src.stats.sojourn import (
    SOJOURN_COLUMNS,
    decompose_membership,
    occupation_identity_check,
    sojourn_decomposition,
    sojourn_frequency_bound,
)


class TestDecomposition:
    def test_in_in_out_in(self):
        record = decompose_membership([True, True, False, True])
        assert record.escape_times == [0, 2, 3]
        assert record.etas == [2]
        assert record.xis == [1]
        assert record.eta_partial == 1
        assert occupation_identity_check(record) == 0
        assert sojourn_frequency_bound(record) == Fraction(2, 3)

    def test_lead_before_first_entry(self):
        record = decompose_membership([False, False, True, False])
        assert record.lead == 2
        assert record.escape_times == [0, 1]
        assert record.etas == [1]
        assert record.xi_partial == 1
        frame = record.to_frame()
        assert list(frame.columns) == SOJOURN_COLUMNS
        assert frame.loc[0, "T_2k-1"] == 1
        assert frame["T_2k"].isna().all()

    def test_all_inside_is_one_laminar_phase(self):
        record = decompose_membership([True] * 6)
        assert record.single_phase
        assert record.etas == [6]
        assert record.escape_times == [0, 6]
        assert occupation_identity_check(record) == 0

    def test_all_outside(self):
        record = decompose_membership([False] * 5)
        assert record.lead == 5
        assert record.etas == []
        assert occupation_identity_check(record) == 0
        assert sojourn_frequency_bound(record) == 0

    def test_empty(self):
        record = decompose_membership([])
        assert occupation_identity_check(record) == 0
        assert sojourn_frequency_bound(record) is None

    @given(st.lists(st.booleans(), max_size=300))
    def test_identity_holds_exactly(self, bits):
        record = decompose_membership(bits)
        assert record.membership() == bits
        assert occupation_identity_check(record) == 0
        bound = sojourn_frequency_bound(record)
        if bits and bound is not None:
            assert bound <= Fraction(sum(bits), len(bits))


class TestOrbitDecomposition:
    def test_identity_on_real_orbit(self, critical):
        record = sojourn_decomposition(critical, 0.3, 0.1, 10.0, 20_000, seed=3)
        assert record.length == 20_000
        assert occupation_identity_check(record) == 0
        assert record.escape_times[0] == 0

    def test_radius_ordering(self, critical):
        with pytest.raises(InvalidParameterError):
            sojourn_decomposition(critical, 0.3, 1.5, 10.0, 100)
        with pytest.raises(InvalidParameterError):
            sojourn_decomposition(critical, 0.3, 0.1, 0.9, 100)

    def test_degenerate_start(self, critical):
        with pytest.raises(DegenerateOrbitError):
            sojourn_decomposition(critical, 0, 0.1, 10.0, 100)

    @pytest.mark.slow
    def test_many_exits(self, critical):
        for index in range(20):
            record = sojourn_decomposition(critical, 0.3, 0.1, 10.0, 1_000_000, seed=0, index=index)
            assert len(record.xis) >= 10
