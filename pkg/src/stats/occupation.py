"""
Occupation fractions of a small ball around the common fixed point.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from loguru import logger

from ..engine.orbit import OrbitEvent, run_orbit
from ..engine.symbols import SymbolStream
from ..exceptions import DegenerateOrbitError, InvalidParameterError
from ..sphere.point import SpherePoint
from ..systems.catalog import Family, IfsSystem

DEGENERATE_TOLERANCE = 1e-12


def ensure_regular_start(system: IfsSystem, z0) -> SpherePoint:
    """Reject starts on a distinguished point"""
    point = SpherePoint.coerce(z0)
    index = system.special_index(point, DEGENERATE_TOLERANCE)
    if index is not None:
        raise DegenerateOrbitError(
            f"Start {point!r} is the distinguished point {system.special_points[index].label}"
        )
    return point


def in_ball(event: OrbitEvent, epsilon: float, punctured: bool = False) -> bool:
    """|z_n| < epsilon; infinity is outside, and the punctured ball also drops z = 0 itself"""
    if event.point.modulus >= epsilon:
        return False
    if punctured and event.log_offset is not None and event.log_offset == -np.inf:
        return False
    if punctured and event.anchor is None and event.point.num == 0:
        return False
    return True


class OccupationObserver:
    def __init__(self, epsilon: float, punctured: bool = False):
        self.epsilon = epsilon
        self.punctured = punctured
        self.inside = 0
        self.total = 0

    def observe(self, event: OrbitEvent) -> None:
        self.total += 1
        if in_ball(event, self.epsilon, self.punctured):
            self.inside += 1

    def merge(self, other: "OccupationObserver") -> "OccupationObserver":
        merged = OccupationObserver(self.epsilon, self.punctured)
        merged.inside = self.inside + other.inside
        merged.total = self.total + other.total
        return merged

    @property
    def fraction(self) -> float:
        return self.inside / self.total if self.total else 0.0


@dataclass
class OccupationResult:
    fractions: List[float]
    epsilon: float
    steps: int
    mean: float = field(init=False)
    median: float = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.fractions, dtype=float)
        self.mean = float(values.mean()) if values.size else float("nan")
        self.median = float(np.median(values)) if values.size else float("nan")

    def summary(self) -> dict:
        return {
            "trials": len(self.fractions),
            "epsilon": self.epsilon,
            "steps": self.steps,
            "mean": self.mean,
            "median": self.median,
            "min": min(self.fractions) if self.fractions else None,
            "max": max(self.fractions) if self.fractions else None,
        }


def occupation_trial(
    system: IfsSystem, z0, epsilon: float, steps: int, seed: int, index: int, punctured: Optional[bool] = None
) -> float:
    """Occupation fraction of one trial; the logistic family uses the punctured ball (0, epsilon)"""
    if punctured is None:
        punctured = system.family is Family.LOGISTIC
    observer = OccupationObserver(epsilon, punctured)
    run_orbit(system, z0, SymbolStream(seed, index, system.p0), steps, (observer,))
    logger.debug(f"Occupation trial {index}: {observer.inside}/{observer.total}")
    return observer.fraction


def occupation_fraction(
    system: IfsSystem, z0, epsilon: float, steps: int, trials: int, seed: int, punctured: Optional[bool] = None
) -> OccupationResult:
    if epsilon <= 0:
        raise InvalidParameterError("epsilon must be positive")
    if steps < 1 or trials < 1:
        raise InvalidParameterError("steps and trials must be positive")
    ensure_regular_start(system, z0)
    fractions = [occupation_trial(system, z0, epsilon, steps, seed, i, punctured) for i in range(trials)]
    return OccupationResult(fractions, epsilon, steps)
