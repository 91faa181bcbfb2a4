"""
Return times to A = [0] x (fundamental annulus of map0 at 0).
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np
from loguru import logger

from ..engine.orbit import OrbitEvent, run_orbit
from ..engine.symbols import SymbolStream
from ..exceptions import InvalidParameterError
from ..systems.catalog import Family, IfsSystem

DEFAULT_INNER_RADIUS = 1e-3
DEFAULT_CAP = 10 ** 8
MAX_REJECTIONS = 10_000


class ReturnObserver:
    """Stops at the first n > 0 with z_n in the annulus and omega_n = 0"""

    def __init__(self, system: IfsSystem, inner_radius: float):
        self.system = system
        self.inner_radius = inner_radius
        self.outer_bound = 2.5 * inner_radius
        self.return_time = None

    @property
    def finished(self) -> bool:
        return self.return_time is not None

    def observe(self, event: OrbitEvent) -> None:
        if event.step == 0 or event.symbol != 0:
            return
        modulus = event.point.modulus
        if modulus < self.inner_radius or modulus > self.outer_bound:
            return
        if self.system.in_fundamental_annulus(event.point.to_complex(), self.inner_radius):
            self.return_time = event.step


def sample_annulus_start(system: IfsSystem, inner_radius: float, rng: np.random.Generator) -> complex:
    """Uniform point of the fundamental annulus, by rejection from the round annulus s <= |z| < 2s"""
    s = inner_radius
    for _ in range(MAX_REJECTIONS):
        if system.family is Family.LOGISTIC:
            z = complex(rng.uniform(s, 2.0 * s))
        else:
            radius = math.sqrt(rng.uniform(s * s, 4.0 * s * s))
            angle = rng.uniform(0.0, 2.0 * math.pi)
            z = radius * complex(math.cos(angle), math.sin(angle))
        if system.in_fundamental_annulus(z, s):
            return z
    raise InvalidParameterError(f"Could not sample the annulus at radius {s}")


@dataclass
class ReturnTimeSample:
    values: np.ndarray
    censored: np.ndarray
    cap: int

    @property
    def censored_count(self) -> int:
        return int(self.censored.sum())

    def summary(self) -> dict:
        return {
            "samples": int(self.values.size),
            "censored": self.censored_count,
            "cap": self.cap,
            "mean_lower_bound": float(self.values.mean()) if self.values.size else None,
            "median": float(np.median(self.values)) if self.values.size else None,
        }


def return_time_trial(system: IfsSystem, inner_radius: float, cap: int, seed: int, index: int):
    """(R, censored) for one start; the first symbol is 0 so the start lies in A"""
    stream = SymbolStream(seed, index, system.p0, prefix=(0,))
    z0 = sample_annulus_start(system, inner_radius, stream.auxiliary())
    observer = ReturnObserver(system, inner_radius)
    run_orbit(system, z0, stream, cap, (observer,))
    if observer.return_time is None:
        return cap, True
    return observer.return_time, False


def kac_return_times(
    system: IfsSystem,
    inner_radius: float = DEFAULT_INNER_RADIUS,
    samples: int = 1000,
    cap: int = DEFAULT_CAP,
    seed: int = 0,
) -> ReturnTimeSample:
    if inner_radius <= 0 or samples < 1 or cap < 1:
        raise InvalidParameterError("Radius, sample count and cap must be positive")
    results = [return_time_trial(system, inner_radius, cap, seed, i) for i in range(samples)]
    return collect_return_times(results, cap)


def collect_return_times(results: Sequence, cap: int) -> ReturnTimeSample:
    values = np.array([r for r, _ in results], dtype=np.int64)
    censored = np.array([c for _, c in results], dtype=bool)
    sample = ReturnTimeSample(values, censored, cap)
    if sample.censored_count:
        logger.warning(f"{sample.censored_count} of {values.size} return times censored at cap {cap}")
    return sample


def running_mean_shifts(values: np.ndarray, sizes: Sequence[int]) -> List[float]:
    """Relative change of the running mean between successive prefix sizes"""
    values = np.asarray(values, dtype=float)
    if any(size > values.size or size < 1 for size in sizes):
        raise InvalidParameterError("Prefix sizes must lie within the sample")
    means = [values[:size].mean() for size in sizes]
    return [abs(b - a) / a for a, b in zip(means, means[1:])]


@dataclass
class TailScaling:
    fractions: Dict[int, float]
    constant: float
    max_factor: float

    def to_dict(self) -> dict:
        return {
            "fractions": {str(k): v for k, v in self.fractions.items()},
            "constant": self.constant,
            "max_factor": self.max_factor,
        }


def tail_scaling(values: np.ndarray, cap: int, exponents: Sequence[int], p0: float) -> TailScaling:
    """P(R > 2^N) against C p0^N, C the geometric mean of the observed ratios"""
    values = np.asarray(values)
    fractions = {}
    for exponent in exponents:
        threshold = 2 ** exponent
        if threshold >= cap:
            raise InvalidParameterError(f"2^{exponent} reaches the censoring cap {cap}")
        fractions[exponent] = float(np.mean(values > threshold))
    positive = {k: v for k, v in fractions.items() if v > 0}
    if not positive:
        return TailScaling(fractions, 0.0, math.inf)
    logs = [math.log(v) - k * math.log(p0) for k, v in positive.items()]
    constant = math.exp(sum(logs) / len(logs))
    factors = []
    for k, v in fractions.items():
        predicted = constant * p0 ** k
        factors.append(math.inf if v == 0 else max(v / predicted, predicted / v))
    return TailScaling(fractions, constant, max(factors))
