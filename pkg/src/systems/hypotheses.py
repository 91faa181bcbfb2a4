"""
Lyapunov exponent at the common fixed point and theorem-hypothesis checks.
"""

import math
from typing import List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from ..sphere.rational_map import planar_derivative
from .catalog import Family, IfsSystem

NONREAL_TOLERANCE = 1e-12
NEUTRAL_TOLERANCE = 1e-12


class HypothesisReport(BaseModel):
    """Regime label attached to every statistics product"""

    family: str
    parameter: List[float]
    p0: float
    p1: float
    lyapunov_value: float
    lyapunov_positive: bool
    lyapunov_degenerate: bool = False
    regime: str
    p0_above_half: bool
    p1_above_half: bool
    lambda_in_unit_disc: Optional[bool] = None
    lambda_nonreal: Optional[bool] = None
    dense_orbits_applies: Optional[bool] = None
    intermittency_applies: Optional[bool] = None
    mu_outside_unit_disc: Optional[bool] = None
    mu_nonreal: Optional[bool] = None
    mobius_verdict: Optional[bool] = None
    warnings: List[str] = Field(default_factory=list)


def origin_multipliers(sys: IfsSystem) -> List[complex]:
    return [planar_derivative(f, 0j) for f in sys.maps]


def lyapunov_at_origin(sys: IfsSystem) -> float:
    """p0 ln|f0'(0)| + p1 ln|f1'(0)|; -inf when a weighted multiplier vanishes"""
    total = 0.0
    for probability, multiplier in zip((sys.p0, sys.p1), origin_multipliers(sys)):
        if probability == 0.0:
            continue
        if multiplier == 0:
            logger.warning("Vanishing multiplier at the origin; Lyapunov exponent is -inf")
            return -math.inf
        total += probability * math.log(abs(multiplier))
    return total


def _regime(value: float) -> str:
    if value > NEUTRAL_TOLERANCE:
        return "repelling-on-average"
    if value < -NEUTRAL_TOLERANCE:
        return "attracting-on-average"
    return "neutral"


def check_hypotheses(sys: IfsSystem) -> HypothesisReport:
    value = lyapunov_at_origin(sys)
    report = HypothesisReport(
        family=sys.family.value,
        parameter=[sys.parameter.real, sys.parameter.imag],
        p0=sys.p0,
        p1=sys.p1,
        lyapunov_value=value,
        lyapunov_positive=value > 0.0,
        lyapunov_degenerate=value == -math.inf,
        regime=_regime(value),
        p0_above_half=sys.p0 > 0.5,
        p1_above_half=sys.p1 > 0.5,
    )

    parameter = sys.parameter
    nonreal = abs(parameter.imag) > NONREAL_TOLERANCE
    if sys.family is Family.CRITICAL:
        report.lambda_in_unit_disc = abs(parameter) < 1.0
        report.lambda_nonreal = nonreal
        report.dense_orbits_applies = report.lambda_in_unit_disc and nonreal
        report.intermittency_applies = (
            report.dense_orbits_applies and report.lyapunov_positive and report.p0_above_half
        )
        if not report.dense_orbits_applies:
            report.warnings.append("lambda outside B(0,1) minus the real axis: orbit density not guaranteed")
        if not report.intermittency_applies:
            report.warnings.append("intermittency hypotheses fail: concentration at 0 not guaranteed")
    elif sys.family is Family.MOBIUS:
        report.mu_outside_unit_disc = abs(parameter) > 1.0
        report.mu_nonreal = nonreal
        report.mobius_verdict = report.mu_outside_unit_disc and nonreal
        if not report.mobius_verdict:
            report.warnings.append("mu must be nonreal with |mu| > 1 for the neutral intermittency result")
    else:
        report.warnings.append("logistic system: both p(g2) > 1/2 and p(g4) > 1/2 are reported, neither binds")

    for message in report.warnings:
        logger.warning(message)
    return report
