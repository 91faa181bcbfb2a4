"""
Local charts at the forward-invariant special points.

Near a special point a the orbit is carried as an offset t in the chart
t = z - a (t = 1/z at infinity), stored as an extended-exponent number so
superattracting squarings never underflow. A step from chart a to chart b
uses the conjugated germ F = chart_b o f o chart_a^-1.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from loguru import logger

from ..series.linearization import taylor_at_zero
from ..sphere.extended import ExtendedComplex
from ..sphere.point import SpherePoint
from ..sphere.rational_map import RationalMap, chart_at, chart_inverse
from ..systems.catalog import IfsSystem, SpecialPoint

ENTER_RADIUS = 1e-6
EXIT_RADIUS = 1e-5
LEADING_TERM_RADIUS = 1e-150
LOG_EXIT = math.log(EXIT_RADIUS)
LOG_LEADING = math.log(LEADING_TERM_RADIUS)
GERM_ORDER = 4
LN2 = math.log(2.0)


@dataclass(frozen=True)
class Germ:
    """Conjugated map between two charts with its leading term c t**k"""

    source: int
    target: int
    conjugate: RationalMap
    order: int
    leading: complex

    @property
    def log_leading_derivative(self) -> float:
        """ln|k c|, the derivative prefactor of the leading term"""
        return math.log(self.order * abs(self.leading))


def log_chart_density(special: SpecialPoint, t: complex) -> float:
    """ln of the spherical density pulled back to the chart coordinate"""
    if special.location is None:
        return LN2 - math.log1p(abs(t) ** 2)
    return LN2 - math.log1p(abs(t + special.location) ** 2)


class ChartAtlas:
    """Charts and germs for one system"""

    def __init__(self, system: IfsSystem):
        self.system = system
        self.specials = system.special_points
        self._charts = [chart_at(s.point) for s in self.specials]
        self._inverses = [chart_inverse(s.point) for s in self.specials]
        self._germs: Dict[Tuple[int, int], Germ] = {}
        for index, special in enumerate(self.specials):
            for symbol in (0, 1):
                self._germs[(index, symbol)] = self._build_germ(index, symbol)
        self._density_at_center = [log_chart_density(s, 0j) for s in self.specials]

    def _build_germ(self, index: int, symbol: int) -> Germ:
        target = self.specials[index].images[symbol]
        f = self.system.map_for(symbol)
        conjugate = self._charts[target].compose(f.compose(self._inverses[index]))
        series = taylor_at_zero(conjugate, GERM_ORDER)
        scale = max(abs(c) for c in series.coeffs)
        order, leading = series.leading_term(tol=1e-12 * scale)
        logger.debug(
            f"Germ {self.specials[index].label} -> {self.specials[target].label} "
            f"under map{symbol}: order {order}, leading {leading}"
        )
        return Germ(index, target, conjugate, order, leading)

    def germ(self, index: int, symbol: int) -> Germ:
        return self._germs[(index, symbol)]

    def density_at_center(self, index: int) -> float:
        return self._density_at_center[index]

    def locate(self, point: SpherePoint) -> Optional[Tuple[int, ExtendedComplex]]:
        """Chart containing the point within the entry radius, with its offset"""
        for index, special in enumerate(self.specials):
            t = _offset(point, special)
            if t is not None and abs(t) < ENTER_RADIUS:
                return index, ExtendedComplex.from_complex(t)
        return None

    def project(self, index: int, offset: ExtendedComplex) -> SpherePoint:
        """Binary64 sphere point of a chart offset; deep offsets round onto the special point"""
        special = self.specials[index]
        t = offset.to_complex()
        if special.location is None:
            return SpherePoint(1.0, t)
        return SpherePoint.from_complex(special.location + t)


def _offset(point: SpherePoint, special: SpecialPoint) -> Optional[complex]:
    if special.location is None:
        if point.num == 0:
            return None
        return point.den / point.num
    if point.is_infinity:
        return None
    return point.to_complex() - special.location


@lru_cache(maxsize=64)
def atlas_for(system: IfsSystem) -> ChartAtlas:
    return ChartAtlas(system)
