"""
The three concrete two-map systems and their distinguished points.

critical:  f0(z) = 2z + z^2,  f1(z) = lambda z / (z+1)^2
mobius:    f0(z) = mu z,      f1(z) = z / (mu + z)
logistic:  f0 = g_2, f1 = g_4 with g_a(x) = a x (1 - x)
"""

import cmath
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from loguru import logger

from ..exceptions import InvalidParameterError
from ..sphere.point import SpherePoint, ZERO
from ..sphere.rational_map import RationalMap, apply

PARAMETER_TOLERANCE = 1e-14
TABLE_TOLERANCE = 1e-12


class Family(str, Enum):
    CRITICAL = "critical"
    MOBIUS = "mobius"
    LOGISTIC = "logistic"


@dataclass(frozen=True)
class SpecialPoint:
    """Distinguished point; location None stands for infinity"""

    location: Optional[complex]
    role: str
    images: Tuple[int, int]

    @property
    def point(self) -> SpherePoint:
        if self.location is None:
            return SpherePoint(1.0, 0.0)
        return SpherePoint.from_complex(self.location)

    @property
    def label(self) -> str:
        if self.location is None:
            return "inf"
        value = self.location
        return f"{value.real:g}" if value.imag == 0 else f"{value:g}"


@dataclass(frozen=True)
class IfsSystem:
    map0: RationalMap
    map1: RationalMap
    p0: float
    family: Family
    parameter: complex
    special_points: Tuple[SpecialPoint, ...]

    def __post_init__(self):
        if not 0.0 <= self.p0 <= 1.0:
            raise InvalidParameterError(f"p0 must lie in [0, 1], got {self.p0}")
        for index, f in enumerate(self.maps):
            if not apply(f, ZERO).isclose(ZERO, TABLE_TOLERANCE):
                raise InvalidParameterError(f"map{index} does not fix 0")
        for special in self.special_points:
            for index, f in enumerate(self.maps):
                target = self.special_points[special.images[index]]
                if not apply(f, special.point).isclose(target.point, TABLE_TOLERANCE):
                    raise InvalidParameterError(
                        f"map{index} does not send {special.label} to {target.label}"
                    )

    @property
    def p1(self) -> float:
        return 1.0 - self.p0

    @property
    def maps(self) -> Tuple[RationalMap, RationalMap]:
        return (self.map0, self.map1)

    def map_for(self, symbol: int) -> RationalMap:
        return self.map1 if symbol else self.map0

    def with_p0(self, p0: float) -> "IfsSystem":
        return IfsSystem(self.map0, self.map1, p0, self.family, self.parameter, self.special_points)

    def special_index(self, point: SpherePoint, tol: float = 0.0) -> Optional[int]:
        """Index of the special point at chordal distance <= tol, if any"""
        for index, special in enumerate(self.special_points):
            if point.isclose(special.point, tol):
                return index
        return None

    def map0_local_inverse(self, z: complex) -> complex:
        """Branch of map0's inverse fixing 0, used to cut the fundamental annulus"""
        if self.family is Family.CRITICAL:
            return cmath.sqrt(1.0 + z) - 1.0
        if self.family is Family.MOBIUS:
            return z / self.parameter
        return (1.0 - cmath.sqrt(1.0 - 2.0 * z)) / 2.0

    def in_fundamental_annulus(self, z: complex, s: float) -> bool:
        """s <= |z| and the local preimage of z lies inside the circle of radius s"""
        return abs(z) >= s and abs(self.map0_local_inverse(z)) < s

    def describe(self) -> dict:
        return {
            "family": self.family.value,
            "parameter": [self.parameter.real, self.parameter.imag],
            "p0": self.p0,
            "p1": self.p1,
        }


def make_critical(lam: complex, p0: float = 0.5) -> IfsSystem:
    """f0 = [2zw + z^2 : w^2], f1 = [lambda z w : (z + w)^2]"""
    lam = complex(lam)
    if abs(lam) <= PARAMETER_TOLERANCE or abs(lam - 1.0) <= PARAMETER_TOLERANCE:
        raise InvalidParameterError(f"lambda must avoid 0 and 1, got {lam}")
    map0 = RationalMap(2, (0, 2, 1), (1, 0, 0))
    map1 = RationalMap(2, (0, lam, 0), (1, 2, 1))
    special = (
        SpecialPoint(0j, "common fixed point", (0, 0)),
        SpecialPoint(-1 + 0j, "superattracting point of f0, sent to infinity by f1", (1, 2)),
        SpecialPoint(None, "superattracting point of f0, sent to 0 by f1", (2, 0)),
    )
    logger.debug(f"Critical system with lambda={lam}, p0={p0}")
    return IfsSystem(map0, map1, float(p0), Family.CRITICAL, lam, special)


def make_mobius(mu: complex, p0: float = 0.5) -> IfsSystem:
    """f0 = [mu z : w], f1 = [z : mu w + z]"""
    mu = complex(mu)
    if abs(mu) <= PARAMETER_TOLERANCE:
        raise InvalidParameterError("mu must be nonzero")
    map0 = RationalMap.mobius(mu, 0, 0, 1)
    map1 = RationalMap.mobius(1, 0, 1, mu)
    special = (SpecialPoint(0j, "common neutral-on-average fixed point", (0, 0)),)
    return IfsSystem(map0, map1, float(p0), Family.MOBIUS, mu, special)


def make_logistic(p0: float = 0.5) -> IfsSystem:
    """g_2 and g_4 on the real axis, p0 the probability of g_2"""
    map0 = RationalMap(2, (0, 2, -2), (1, 0, 0))
    map1 = RationalMap(2, (0, 4, -4), (1, 0, 0))
    special = (
        SpecialPoint(0j, "common repelling fixed point", (0, 0)),
        SpecialPoint(0.5 + 0j, "superattracting point of g2, sent to 1 by g4", (1, 2)),
        SpecialPoint(1 + 0j, "preimage of 0 under both maps", (0, 0)),
    )
    return IfsSystem(map0, map1, float(p0), Family.LOGISTIC, 0j, special)


def make_system(family: str, parameter: complex = 0j, p0: float = 0.5) -> IfsSystem:
    family = Family(family)
    if family is Family.CRITICAL:
        return make_critical(parameter, p0)
    if family is Family.MOBIUS:
        return make_mobius(parameter, p0)
    return make_logistic(p0)
