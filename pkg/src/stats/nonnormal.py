"""
Growth of R_n = |v_n| / |z_n| along the cone word policy.

Coordinates linearize f1 (Koenigs series psi), so g1(z) = lambda z exactly and
g0 = psi o f0 o psi^-1. The series psi is rescaled so that g0(z) = 2z + z^2 + ...
Policy: apply g1 until z enters the cone C = {0 < |z| < r/3, |arg z| < 2pi/5},
then apply g0 until z leaves C. One g1 block followed by one g0 block is a cycle.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import List

from loguru import logger

from ..exceptions import InvalidParameterError, ScaleTooLargeError
from ..series.linearization import PROBE_ORDER, koenigs_linearizer, taylor_at_zero
from ..series.truncated import TruncatedSeries, compose, reversion
from ..systems.catalog import make_critical

CHECK_OFFSET = 5
TRUNCATION_TOLERANCE = 1e-8
CONE_ANGLE = 2.0 * math.pi / 5.0
CHECK_POINTS = 64
MAX_SCALE = 0.01
MAX_BLOCK = 10_000


@dataclass
class NonNormalityReport:
    ratios: List[float]
    symbols: List[int]
    cycle_gains: List[float] = field(default_factory=list)
    truncation_error: float = 0.0

    @property
    def growth(self) -> float:
        return self.ratios[-1] / self.ratios[0]

    def summary(self) -> dict:
        return {
            "steps": len(self.symbols),
            "cycles": len(self.cycle_gains),
            "initial_ratio": self.ratios[0],
            "final_ratio": self.ratios[-1],
            "growth": self.growth,
            "min_cycle_gain": min(self.cycle_gains) if self.cycle_gains else None,
            "truncation_error": self.truncation_error,
        }


def conjugated_map0(lam: complex, order: int) -> TruncatedSeries:
    """f0 in f1-linearizing coordinates, normalized to 2z + z^2 + O(z^3)"""
    system = make_critical(lam)
    f0 = taylor_at_zero(system.map0, order)
    psi = koenigs_linearizer(taylor_at_zero(system.map1, order))
    g0 = compose(psi, compose(f0, reversion(psi)))
    quadratic = g0[2]
    if abs(quadratic) < 1e-12:
        raise InvalidParameterError("Conjugated map has no quadratic term to normalize")
    return TruncatedSeries(order, tuple(c * quadratic ** (1 - k) for k, c in enumerate(g0.coeffs, start=1)))


def _in_cone(z: complex, r: float) -> bool:
    return 0.0 < abs(z) < r / 3.0 and abs(cmath.phase(z)) < CONE_ANGLE


def non_normality_probe(lam: complex, r: float, cycles: int, order: int = PROBE_ORDER) -> NonNormalityReport:
    lam = complex(lam)
    if not (0.0 < abs(lam) < 1.0) or abs(lam.imag) <= 1e-12:
        raise InvalidParameterError(f"Probe needs lambda in B(0,1) off the real axis, got {lam}")
    if not 0.0 < r <= MAX_SCALE:
        raise InvalidParameterError(f"Probe scale r must lie in (0, {MAX_SCALE}], got {r}")

    g0 = conjugated_map0(lam, order)
    reference = conjugated_map0(lam, order + CHECK_OFFSET)
    error = 0.0
    for j in range(CHECK_POINTS):
        z = r * cmath.exp(2j * math.pi * j / CHECK_POINTS)
        exact = reference.evaluate(z)
        error = max(error, abs(g0.evaluate(z) - exact) / abs(exact))
    if error > TRUNCATION_TOLERANCE:
        raise ScaleTooLargeError(f"Order {order} vs {order + CHECK_OFFSET} disagree by {error:.3e} at r={r}")

    z = complex(r / 4.0)
    v = 1.0 + 0j
    ratios = [abs(v) / abs(z)]
    symbols: List[int] = []
    gains: List[float] = []
    for _ in range(cycles):
        for _ in range(MAX_BLOCK):
            if _in_cone(z, r):
                break
            z, v = lam * z, lam * v
            symbols.append(1)
            ratios.append(abs(v) / abs(z))
        else:
            raise InvalidParameterError("Linear block never reached the cone")
        start = ratios[-1]
        while _in_cone(z, r):
            z, v = g0.evaluate(z), g0.derivative_at(z) * v
            symbols.append(0)
            ratios.append(abs(v) / abs(z))
        gains.append(ratios[-1] / start)

    report = NonNormalityReport(ratios, symbols, gains, error)
    logger.info(f"Non-normality probe: {cycles} cycles, growth {report.growth:.4g}")
    return report
