import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.engine import (
    MembershipObserver,
    TraceObserver,
    finite_time_lyapunov,
    merge_all,
    replay,
    run_orbit,
    step_skew,
    word_apply,
)
from src.engine.charts import atlas_for
from src.engine.orbit import OrbitState
from src.engine.symbols import SymbolStream
from src.exceptions import InvalidParameterError, ObserverError, UndefinedStatisticError
from src.sphere.point import INFINITY, MINUS_ONE, ZERO, SpherePoint, chordal_distance
from src.sphere.rational_map import apply
from src.systems.catalog import make_critical, make_mobius
from src.systems.hypotheses import lyapunov_at_origin, origin_multipliers

CRITICAL = make_critical(0.5j, 0.6)

words = st.lists(st.integers(min_value=0, max_value=1), max_size=10)
start_points = st.builds(complex, st.floats(-10, 10), st.floats(-10, 10))


class TestSymbolStream:
    def test_same_seed_same_symbols(self):
        a = SymbolStream(7, 3, 0.6).draw(10_000)
        b = SymbolStream(7, 3, 0.6).draw(10_000)
        assert np.array_equal(a, b)

    def test_distinct_streams_differ(self):
        assert not np.array_equal(SymbolStream(7, 0, 0.6).draw(1000), SymbolStream(7, 1, 0.6).draw(1000))

    def test_interleaving_does_not_change_sequence(self):
        whole = SymbolStream(1, 0, 0.3).draw(9000)
        stream = SymbolStream(1, 0, 0.3)
        pieces = [stream.next_symbol() for _ in range(5)]
        pieces.extend(stream.draw(4990).tolist())
        pieces.extend(stream.next_symbol() for _ in range(4005))
        assert pieces == whole.tolist()
        assert stream.position == 9000

    def test_degenerate_probabilities(self):
        assert SymbolStream(0, 0, 1.0).draw(5000).sum() == 0
        assert SymbolStream(0, 0, 0.0).draw(5000).sum() == 5000

    def test_frequency(self):
        ones = SymbolStream(11, 0, 0.6).draw(200_000).mean()
        assert ones == pytest.approx(0.4, abs=0.005)

    def test_prefix_comes_first(self):
        stream = SymbolStream(0, 0, 1.0, prefix=(1, 1, 0, 1))
        assert stream.draw(6).tolist() == [1, 1, 0, 1, 0, 0]

    @pytest.mark.parametrize("kwargs", [{"p0": 1.5}, {"p0": -0.1}, {"master_seed": -1}])
    def test_invalid_arguments(self, kwargs):
        params = {"master_seed": 0, "stream_index": 0, "p0": 0.5}
        params.update(kwargs)
        with pytest.raises(InvalidParameterError):
            SymbolStream(**params)


class TestOrbit:
    def test_replay_matches_run(self, critical):
        trace = TraceObserver()
        final = run_orbit(critical, 0.3, SymbolStream(5, 0, critical.p0), 2000, [trace])
        symbols = trace.to_frame()["symbol"].tolist()
        replayed = replay(critical, 0.3, symbols)
        assert replayed.point == final.point
        assert replayed.step == final.step == 2000
        assert replayed.log_tangent == pytest.approx(final.log_tangent, rel=1e-12)

    def test_step_skew_shifts_history(self, critical):
        state = OrbitState.start(critical, 0.3)
        for symbol in (0, 1, 1):
            state = step_skew(critical, state, symbol, history_window=2)
        assert state.step == 3
        assert state.history == (1, 1)
        assert state.point == word_apply(critical, (0, 1, 1), 0.3)

    def test_trace_rows_are_pre_step_points(self, critical):
        trace = TraceObserver()
        run_orbit(critical, 0.3, SymbolStream(0, 0, critical.p0), 3, [trace])
        frame = trace.to_frame()
        assert frame["step"].tolist() == [0, 1, 2]
        assert frame.loc[0, "re"] == pytest.approx(0.3)
        first = apply(critical.map_for(int(frame.loc[0, "symbol"])), SpherePoint.from_complex(0.3))
        assert frame.loc[1, "re"] == pytest.approx(first.to_complex().real)

    def test_pole_passage_is_exact(self, critical):
        stream = SymbolStream(0, 0, critical.p0, prefix=(1, 1))
        state = run_orbit(critical, -1, stream, 2)
        assert state.point == ZERO
        assert state.log_tangent == -math.inf

    def test_superattracting_offsets_do_not_underflow(self, critical):
        stream = SymbolStream(0, 0, critical.p0, prefix=(0,) * 20)
        state = run_orbit(critical, -1 + 1e-3, stream, 20)
        assert state.anchor == 1
        assert state.point == MINUS_ONE
        assert state.log_offset == pytest.approx(2 ** 20 * math.log(1e-3), rel=1e-3)

    @pytest.mark.parametrize(
        "system",
        [make_critical(0.5j, 0.6), make_critical(0.5, 0.5), make_mobius(1.2 * cmath.exp(1j), 0.5)],
        ids=["critical-0.5i", "critical-real-balanced", "mobius"],
    )
    def test_lyapunov_at_common_fixed_point(self, system):
        steps = 100_000
        state = run_orbit(system, 0, SymbolStream(2, 0, system.p0), steps)
        assert state.point == ZERO
        log0, log1 = (math.log(abs(m)) for m in origin_multipliers(system))
        sigma = abs(log0 - log1) * math.sqrt(system.p0 * system.p1 / steps)
        assert finite_time_lyapunov(state) == pytest.approx(lyapunov_at_origin(system), abs=3 * sigma)

    def test_zero_steps(self, critical):
        state = run_orbit(critical, 0.3, SymbolStream(0, 0, 0.6), 0)
        assert state.step == 0
        with pytest.raises(UndefinedStatisticError):
            finite_time_lyapunov(state)

    def test_negative_steps(self, critical):
        with pytest.raises(ValueError):
            run_orbit(critical, 0.3, SymbolStream(0, 0, 0.6), -1)

    def test_observer_failure_is_wrapped(self, critical):
        class Exploding:
            def observe(self, event):
                if event.step == 4:
                    raise RuntimeError("boom")

            def merge(self, other):
                return self

        with pytest.raises(ObserverError) as info:
            run_orbit(critical, 0.3, SymbolStream(0, 0, 0.6), 10, [Exploding()])
        assert info.value.step == 4
        assert info.value.observer == "Exploding"

    def test_finished_observer_stops_run(self, critical):
        class StopAfterThree:
            def __init__(self):
                self.seen = 0

            @property
            def finished(self):
                return self.seen >= 3

            def observe(self, event):
                self.seen += 1

            def merge(self, other):
                return self

        state = run_orbit(critical, 0.3, SymbolStream(0, 0, 0.6), 100, [StopAfterThree()])
        assert state.step == 2

    def test_word_apply_order(self, critical):
        assert word_apply(critical, (1,), MINUS_ONE) == INFINITY
        assert word_apply(critical, (1, 1), MINUS_ONE) == ZERO
        assert word_apply(critical, (0, 1), MINUS_ONE) == INFINITY

    def test_maps_do_not_commute(self, critical):
        assert chordal_distance(word_apply(critical, [0, 1], 0.2), word_apply(critical, [1, 0], 0.2)) > 1e-3

    @given(words, words, start_points)
    def test_word_concatenation_is_composition(self, u, v, z):
        joined = word_apply(CRITICAL, u + v, z)
        stepwise = word_apply(CRITICAL, v, word_apply(CRITICAL, u, z))
        assert chordal_distance(joined, stepwise) <= 1e-10


class TestCharts:
    def test_germ_orders(self, critical):
        atlas = atlas_for(critical)
        assert atlas.germ(0, 0).order == 1
        assert atlas.germ(0, 0).leading == pytest.approx(2)
        assert atlas.germ(0, 1).leading == pytest.approx(0.5j)
        assert atlas.germ(1, 0).order == 2
        assert atlas.germ(1, 1).target == 2

    def test_locate(self, critical):
        atlas = atlas_for(critical)
        index, offset = atlas.locate(SpherePoint.from_complex(-1 + 1e-8))
        assert index == 1
        assert offset.to_complex() == pytest.approx(1e-8)
        assert atlas.locate(SpherePoint.from_complex(0.3)) is None


class TestObservers:
    def test_trace_limit_and_merge(self, critical):
        first, second = TraceObserver(limit=5), TraceObserver(limit=5)
        run_orbit(critical, 0.3, SymbolStream(0, 0, 0.6), 20, [first])
        run_orbit(critical, 0.3, SymbolStream(0, 1, 0.6), 20, [second])
        assert len(first.rows) == 5
        assert len(merge_all([first, second]).rows) == 10

    def test_membership(self, critical):
        observer = MembershipObserver(lambda event: event.step % 2 == 0)
        run_orbit(critical, 0.3, SymbolStream(0, 0, 0.6), 4, [observer])
        assert observer.bits == [True, False, True, False]

    def test_merge_all_needs_input(self):
        with pytest.raises(ValueError):
            merge_all([])
