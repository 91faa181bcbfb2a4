"""
Truncated formal power series without constant term.

A series of order K carries a_1..a_K; products and compositions are cut at z**K.
"""

from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from ..exceptions import InvalidParameterError, OrderMismatchError

ZERO_TOLERANCE = 1e-14


@dataclass(frozen=True)
class TruncatedSeries:
    order: int
    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.order < 2:
            raise InvalidParameterError(f"Series order must be at least 2, got {self.order}")
        if len(self.coeffs) != self.order:
            raise InvalidParameterError(
                f"Order {self.order} series needs {self.order} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[complex]) -> "TruncatedSeries":
        coeffs = tuple(coeffs)
        return cls(len(coeffs), coeffs)

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        return cls(order, (1.0,) + (0.0,) * (order - 1))

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls(order, (0.0,) * order)

    @classmethod
    def _from_full(cls, full: np.ndarray, order: int) -> "TruncatedSeries":
        return cls(order, tuple(full[1:order + 1]))

    def full(self) -> np.ndarray:
        """Coefficient array indexed by power, constant term included"""
        return np.concatenate(([0j], np.array(self.coeffs, dtype=complex)))

    @property
    def multiplier(self) -> complex:
        return self.coeffs[0]

    def __getitem__(self, power: int) -> complex:
        """Coefficient of z**power"""
        if power < 1 or power > self.order:
            raise IndexError(f"Power {power} outside 1..{self.order}")
        return self.coeffs[power - 1]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        _check_orders(self, other)
        return TruncatedSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        _check_orders(self, other)
        return TruncatedSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, factor: complex) -> "TruncatedSeries":
        return TruncatedSeries(self.order, tuple(factor * a for a in self.coeffs))

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            return TruncatedSeries(order, self.coeffs + (0.0,) * (order - self.order))
        return TruncatedSeries(order, self.coeffs[:order])

    def is_zero(self, tol: float = ZERO_TOLERANCE) -> bool:
        return all(abs(a) <= tol for a in self.coeffs)

    def leading_term(self, tol: float = ZERO_TOLERANCE) -> Tuple[int, complex]:
        """(k, c) of the first coefficient above tol"""
        for power, value in enumerate(self.coeffs, start=1):
            if abs(value) > tol:
                return power, value
        raise InvalidParameterError("Series vanishes to its full order")

    def evaluate(self, z: complex) -> complex:
        acc = 0j
        for value in reversed(self.coeffs):
            acc = acc * z + value
        return acc * z

    def derivative_at(self, z: complex) -> complex:
        acc = 0j
        for power in range(self.order, 0, -1):
            acc = acc * z + power * self.coeffs[power - 1]
        return acc

    def powers(self, count: int) -> List[np.ndarray]:
        """Full arrays of self**j for j = 0..count, truncated at the order"""
        base = self.full()
        result = [np.zeros(self.order + 1, dtype=complex)]
        result[0][0] = 1.0
        for _ in range(count):
            result.append(np.convolve(result[-1], base)[:self.order + 1])
        return result

    def as_pairs(self) -> List[List[float]]:
        return [[a.real, a.imag] for a in self.coeffs]


def _check_orders(f: TruncatedSeries, g: TruncatedSeries) -> None:
    if f.order != g.order:
        raise OrderMismatchError(f"Series orders differ: {f.order} vs {g.order}")


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(z)) truncated at the common order"""
    _check_orders(f, g)
    g_powers = g.powers(f.order)
    result = np.zeros(f.order + 1, dtype=complex)
    for j, a_j in enumerate(f.coeffs, start=1):
        if a_j != 0:
            result += a_j * g_powers[j]
    return TruncatedSeries._from_full(result, f.order)


def reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse h with f(h(z)) = z to the series order"""
    a1 = f.multiplier
    if abs(a1) <= ZERO_TOLERANCE:
        raise InvalidParameterError("Series with vanishing multiplier has no compositional inverse")
    coeffs = [0j] * f.order
    coeffs[0] = 1.0 / a1
    for n in range(2, f.order + 1):
        partial = compose(f, TruncatedSeries(f.order, tuple(coeffs)))
        coeffs[n - 1] = -partial[n] / a1
    return TruncatedSeries(f.order, tuple(coeffs))
