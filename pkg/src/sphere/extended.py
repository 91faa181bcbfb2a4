"""
Extended-exponent complex numbers m * 2**e for chart offsets that would
underflow binary64 during superattracting excursions.
"""

import math
from typing import NamedTuple

LN2 = math.log(2.0)
EXPONENT_FLOOR = -(1 << 60)


class ExtendedComplex(NamedTuple):
    mantissa: complex
    exponent: int

    @classmethod
    def from_complex(cls, value: complex) -> "ExtendedComplex":
        value = complex(value)
        scale = max(abs(value.real), abs(value.imag))
        if scale == 0.0:
            return cls(0j, 0)
        _, e = math.frexp(scale)
        return cls(complex(math.ldexp(value.real, -e), math.ldexp(value.imag, -e)), e)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def to_complex(self) -> complex:
        """Binary64 value; underflows to 0 for very deep offsets"""
        m, e = self
        return complex(_ldexp(m.real, e), _ldexp(m.imag, e))

    def log_abs(self) -> float:
        if self.mantissa == 0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent * LN2

    def times(self, factor: complex) -> "ExtendedComplex":
        m = self.mantissa * factor
        return _renormalized(m, self.exponent)

    def power(self, k: int) -> "ExtendedComplex":
        m = self.mantissa ** k
        return _renormalized(m, self.exponent * k)


def _renormalized(m: complex, e: int) -> ExtendedComplex:
    scale = max(abs(m.real), abs(m.imag))
    if scale == 0.0:
        return ExtendedComplex(0j, 0)
    _, shift = math.frexp(scale)
    return ExtendedComplex(
        complex(math.ldexp(m.real, -shift), math.ldexp(m.imag, -shift)), max(e + shift, EXPONENT_FLOOR)
    )


def _ldexp(x: float, e: int) -> float:
    if x == 0.0:
        return 0.0
    try:
        return math.ldexp(x, max(e, -2200))
    except OverflowError:
        return math.copysign(math.inf, x)
