"""
The skew product F(omega, z) = (shift omega, f_{omega_0}(z)).

Points away from the special points are iterated in homogeneous binary64
coordinates. Within ENTER_RADIUS of a special point the orbit switches to that
point's chart (see charts.py) and is carried as an extended-exponent offset
until it leaves EXIT_RADIUS. Points exactly on a special point follow the
invariance table.
"""

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from loguru import logger

from ..exceptions import IndeterminateEvaluationError, ObserverError, UndefinedStatisticError
from ..sphere.extended import ExtendedComplex
from ..sphere.point import SpherePoint
from ..sphere.rational_map import INDETERMINATE_FLOOR, apply, planar_derivative
from ..systems.catalog import IfsSystem
from .charts import LOG_EXIT, LOG_LEADING, ChartAtlas, atlas_for, log_chart_density
from .symbols import SymbolStream

HISTORY_WINDOW = 256


class OrbitEvent(NamedTuple):
    """z_n together with the symbol omega_n about to act on it"""

    step: int
    symbol: int
    point: SpherePoint
    anchor: Optional[int]
    log_offset: Optional[float]


@dataclass(frozen=True)
class OrbitState:
    step: int
    point: SpherePoint
    log_tangent: float = 0.0
    history: Tuple[int, ...] = ()
    anchor: Optional[int] = None
    offset: Optional[ExtendedComplex] = None

    @classmethod
    def start(cls, system: IfsSystem, z0) -> "OrbitState":
        point = SpherePoint.coerce(z0)
        located = atlas_for(system).locate(point)
        if located is None:
            return cls(0, point)
        anchor, offset = located
        return cls(0, point, anchor=anchor, offset=offset)

    @property
    def log_offset(self) -> Optional[float]:
        if self.anchor is None:
            return None
        return self.offset.log_abs()


def _free_step(f, point: SpherePoint) -> Tuple[SpherePoint, float]:
    z, w = point.num, point.den
    num, den = f.forms(z, w)
    if abs(num) < INDETERMINATE_FLOOR and abs(den) < INDETERMINATE_FLOOR:
        raise IndeterminateEvaluationError(f"Both forms vanished at {point!r}")
    p_z, p_w, q_z, q_w = f.partials(z, w)
    jacobian = abs(p_z * q_w - p_w * q_z)
    if jacobian == 0.0:
        log_derivative = -math.inf
    else:
        source = abs(z) ** 2 + abs(w) ** 2
        target = abs(num) ** 2 + abs(den) ** 2
        log_derivative = math.log(jacobian) + math.log(source) - math.log(f.degree * target)
    return SpherePoint(num, den), log_derivative


def _chart_step(atlas: ChartAtlas, anchor: int, offset: ExtendedComplex, symbol: int):
    germ = atlas.germ(anchor, symbol)
    target = germ.target
    if offset.is_zero:
        if germ.order > 1:
            return target, offset, -math.inf
        log_derivative = germ.log_leading_derivative + atlas.density_at_center(target) - atlas.density_at_center(anchor)
        return target, offset, log_derivative

    log_t = offset.log_abs()
    if log_t < LOG_LEADING:
        image = offset.power(germ.order).times(germ.leading)
        log_derivative = (
            germ.log_leading_derivative
            + (germ.order - 1) * log_t
            + atlas.density_at_center(target)
            - atlas.density_at_center(anchor)
        )
        return target, image, log_derivative

    t = offset.to_complex()
    t_image = germ.conjugate.affine(t)
    slope = abs(planar_derivative(germ.conjugate, t))
    specials = atlas.specials
    log_derivative = (
        (math.log(slope) if slope > 0.0 else -math.inf)
        + log_chart_density(specials[target], t_image)
        - log_chart_density(specials[anchor], t)
    )
    return target, ExtendedComplex.from_complex(t_image), log_derivative


def advance(atlas: ChartAtlas, point: SpherePoint, anchor: Optional[int], offset, symbol: int):
    """One fiber step; returns (point, anchor, offset, ln of the spherical derivative)"""
    if anchor is None:
        point, log_derivative = _free_step(atlas.system.map_for(symbol), point)
        located = atlas.locate(point)
        if located is None:
            return point, None, None, log_derivative
        anchor, offset = located
        return point, anchor, offset, log_derivative

    anchor, offset, log_derivative = _chart_step(atlas, anchor, offset, symbol)
    if not offset.is_zero and offset.log_abs() > LOG_EXIT:
        point = atlas.project(anchor, offset)
        located = atlas.locate(point)
        if located is None:
            return point, None, None, log_derivative
        anchor, offset = located
    return atlas.project(anchor, offset), anchor, offset, log_derivative


def step_skew(system: IfsSystem, state: OrbitState, symbol: int, history_window: int = HISTORY_WINDOW) -> OrbitState:
    atlas = atlas_for(system)
    point, anchor, offset, log_derivative = advance(atlas, state.point, state.anchor, state.offset, symbol)
    history = (state.history + (symbol,))[-history_window:]
    return OrbitState(state.step + 1, point, state.log_tangent + log_derivative, history, anchor, offset)


def run_orbit(
    system: IfsSystem,
    z0,
    stream: SymbolStream,
    steps: int,
    observers: Sequence = (),
    history_window: int = HISTORY_WINDOW,
) -> OrbitState:
    """Iterate `steps` times, reporting (n, omega_n, z_n) for 0 <= n < steps to every observer"""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    start = OrbitState.start(system, z0)
    atlas = atlas_for(system)
    point, anchor, offset = start.point, start.anchor, start.offset
    log_tangent = 0.0
    history = deque(maxlen=history_window)
    stoppable = [o for o in observers if hasattr(o, "finished")]
    logger.debug(f"Orbit of {point!r} for {steps} steps on stream {stream.stream_index}")

    done = 0
    for n in range(steps):
        symbol = stream.next_symbol()
        if observers:
            event = OrbitEvent(n, symbol, point, anchor, None if anchor is None else offset.log_abs())
            for observer in observers:
                try:
                    observer.observe(event)
                except Exception as e:
                    raise ObserverError(n, type(observer).__name__, e) from e
            if stoppable and any(o.finished for o in stoppable):
                break
        point, anchor, offset, log_derivative = advance(atlas, point, anchor, offset, symbol)
        log_tangent += log_derivative
        history.append(symbol)
        done = n + 1

    return OrbitState(done, point, log_tangent, tuple(history), anchor, offset)


def replay(system: IfsSystem, z0, symbols: Iterable[int]) -> OrbitState:
    """Recompute an orbit from its symbol word with step_skew"""
    state = OrbitState.start(system, z0)
    for symbol in symbols:
        state = step_skew(system, state, symbol)
    return state


def finite_time_lyapunov(state: OrbitState) -> float:
    if state.step == 0:
        raise UndefinedStatisticError("Finite-time Lyapunov exponent needs at least one step")
    return state.log_tangent / state.step


def word_apply(system: IfsSystem, word: Sequence[int], z) -> SpherePoint:
    """Apply word[0] first, then word[1], and so on"""
    point = SpherePoint.coerce(z)
    for symbol in word:
        point = apply(system.map_for(symbol), point)
    return point
