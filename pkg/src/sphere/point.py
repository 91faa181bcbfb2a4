"""
Points of the Riemann sphere in homogeneous coordinates.

A point is the projective class [num : den]. The stored representative has its
larger-modulus component equal to exactly 1, so |num|^2 + |den|^2 lies in [1, 2]
and the representative of a class is deterministic.
"""

import math
from typing import Tuple, Union

from ..exceptions import ChartError, InvalidPointError

EQUALITY_TOLERANCE = 1e-12


class SpherePoint:
    """Immutable point [num : den] of the Riemann sphere"""

    __slots__ = ("_num", "_den")

    def __init__(self, num: complex, den: complex):
        num, den = _normalized_pair(complex(num), complex(den))
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    @classmethod
    def _trusted(cls, num: complex, den: complex) -> "SpherePoint":
        # Caller guarantees (num, den) is already a normalized representative.
        point = object.__new__(cls)
        object.__setattr__(point, "_num", num)
        object.__setattr__(point, "_den", den)
        return point

    @classmethod
    def from_complex(cls, z: complex) -> "SpherePoint":
        """Embed a finite complex number as [z : 1]"""
        return cls(complex(z), 1.0)

    @classmethod
    def coerce(cls, value: Union["SpherePoint", complex, float, int]) -> "SpherePoint":
        if isinstance(value, SpherePoint):
            return value
        return cls.from_complex(complex(value))

    def __setattr__(self, name, value):
        raise AttributeError("SpherePoint is immutable")

    def __reduce__(self):
        return (SpherePoint, (self._num, self._den))

    @property
    def num(self) -> complex:
        return self._num

    @property
    def den(self) -> complex:
        return self._den

    @property
    def is_infinity(self) -> bool:
        return self._den == 0

    @property
    def modulus(self) -> float:
        """Planar |z|; infinity is infinitely far from 0"""
        if self._den == 0:
            return math.inf
        if self._den == 1:
            return abs(self._num)
        return 1.0 / abs(self._den)

    def to_complex(self) -> complex:
        """Affine-chart value z = num/den"""
        if self._den == 0:
            raise ChartError("Point at infinity has no affine coordinate")
        return self._num / self._den

    def lift(self) -> Tuple[float, float, float]:
        """Stereographic lift to the unit sphere, 0 at the south pole and infinity at the north pole"""
        cross = self._num * self._den.conjugate()
        a = abs(self._num) ** 2
        b = abs(self._den) ** 2
        norm = a + b
        return (2.0 * cross.real / norm, 2.0 * cross.imag / norm, (a - b) / norm)

    def chordal_to_zero(self) -> float:
        return 2.0 * abs(self._num) / math.sqrt(abs(self._num) ** 2 + abs(self._den) ** 2)

    def isclose(self, other: "SpherePoint", tol: float = EQUALITY_TOLERANCE) -> bool:
        return chordal_distance(self, other) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def key(self, digits: int = 12) -> Tuple[float, float, float, float]:
        """Rounded representative, stable for deduplication"""
        return (
            round(self._num.real, digits),
            round(self._num.imag, digits),
            round(self._den.real, digits),
            round(self._den.imag, digits),
        )

    def __repr__(self) -> str:
        if self._den == 0:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex()!r})"


def _normalized_pair(num: complex, den: complex) -> Tuple[complex, complex]:
    if not (_finite(num) and _finite(den)):
        raise InvalidPointError(f"Non-finite homogeneous pair ({num}, {den})")
    a = abs(num)
    b = abs(den)
    if a == 0 and b == 0:
        raise InvalidPointError("Homogeneous pair (0, 0) is not a point")
    if a >= b:
        return 1.0 + 0j, den / num
    return num / den, 1.0 + 0j


def _finite(value: complex) -> bool:
    return math.isfinite(value.real) and math.isfinite(value.imag)


def normalize(p: Union[SpherePoint, Tuple[complex, complex]]) -> SpherePoint:
    """Return the deterministic normalized representative of a homogeneous pair"""
    if isinstance(p, SpherePoint):
        return SpherePoint(p.num, p.den)
    num, den = p
    return SpherePoint(num, den)


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """2|z1 w2 - z2 w1| / (|p| |q|); 2 between antipodes"""
    cross = p.num * q.den - q.num * p.den
    norm_p = math.sqrt(abs(p.num) ** 2 + abs(p.den) ** 2)
    norm_q = math.sqrt(abs(q.num) ** 2 + abs(q.den) ** 2)
    return min(2.0, 2.0 * abs(cross) / (norm_p * norm_q))


ZERO = SpherePoint(0.0, 1.0)
INFINITY = SpherePoint(1.0, 0.0)
MINUS_ONE = SpherePoint(-1.0, 1.0)
