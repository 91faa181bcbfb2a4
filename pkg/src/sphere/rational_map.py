"""
Rational maps of the sphere as pairs of homogeneous forms.

Coefficient k of a form of degree d multiplies z**k * w**(d-k), so the lists
double as ascending coefficient lists of the affine-chart polynomials P(z,1), Q(z,1).
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..exceptions import ChartError, IndeterminateEvaluationError, InvalidParameterError
from .point import SpherePoint

RESULTANT_TOLERANCE = 1e-12
INDETERMINATE_FLOOR = 1e-300
MAX_DEGREE = 4


@dataclass(frozen=True)
class RationalMap:
    """[z : w] -> [P(z, w) : Q(z, w)] with P, Q homogeneous of degree d"""

    degree: int
    p_coeffs: Tuple[complex, ...]
    q_coeffs: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "p_coeffs", tuple(complex(c) for c in self.p_coeffs))
        object.__setattr__(self, "q_coeffs", tuple(complex(c) for c in self.q_coeffs))
        if self.degree < 1:
            raise InvalidParameterError(f"Degree must be positive, got {self.degree}")
        if len(self.p_coeffs) != self.degree + 1 or len(self.q_coeffs) != self.degree + 1:
            raise InvalidParameterError(
                f"Coefficient lists must have length {self.degree + 1}, "
                f"got {len(self.p_coeffs)} and {len(self.q_coeffs)}"
            )
        if abs(self.resultant()) <= RESULTANT_TOLERANCE:
            raise InvalidParameterError("Forms share a projective root (resultant vanishes)")

    @classmethod
    def from_forms(cls, p_coeffs: Sequence[complex], q_coeffs: Sequence[complex]) -> "RationalMap":
        return cls(len(p_coeffs) - 1, tuple(p_coeffs), tuple(q_coeffs))

    @classmethod
    def mobius(cls, a: complex, b: complex, c: complex, d: complex) -> "RationalMap":
        """z -> (a z + b) / (c z + d)"""
        return cls(1, (b, a), (d, c))

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls.mobius(1, 0, 0, 1)

    def resultant(self) -> complex:
        """Sylvester resultant of the normalized forms"""
        scale = max(max(abs(c) for c in self.p_coeffs), max(abs(c) for c in self.q_coeffs))
        if scale == 0.0:
            return 0j
        d = self.degree
        p_desc = [c / scale for c in reversed(self.p_coeffs)]
        q_desc = [c / scale for c in reversed(self.q_coeffs)]
        sylvester = np.zeros((2 * d, 2 * d), dtype=complex)
        for row in range(d):
            sylvester[row, row:row + d + 1] = p_desc
            sylvester[d + row, row:row + d + 1] = q_desc
        return complex(np.linalg.det(sylvester))

    def forms(self, z: complex, w: complex) -> Tuple[complex, complex]:
        """Evaluate (P(z, w), Q(z, w)) by homogeneous Horner"""
        d = self.degree
        p = self.p_coeffs
        q = self.q_coeffs
        acc_p = p[d]
        acc_q = q[d]
        w_power = 1.0 + 0j
        for k in range(d - 1, -1, -1):
            w_power = w_power * w
            acc_p = acc_p * z + p[k] * w_power
            acc_q = acc_q * z + q[k] * w_power
        return acc_p, acc_q

    def partials(self, z: complex, w: complex) -> Tuple[complex, complex, complex, complex]:
        """(P_z, P_w, Q_z, Q_w) at (z, w)"""
        d = self.degree
        z_pow = [1.0 + 0j] * (d + 1)
        w_pow = [1.0 + 0j] * (d + 1)
        for k in range(1, d + 1):
            z_pow[k] = z_pow[k - 1] * z
            w_pow[k] = w_pow[k - 1] * w
        p_z = p_w = q_z = q_w = 0j
        for k in range(d + 1):
            a = self.p_coeffs[k]
            b = self.q_coeffs[k]
            if k > 0:
                term = k * z_pow[k - 1] * w_pow[d - k]
                p_z += a * term
                q_z += b * term
            if k < d:
                term = (d - k) * z_pow[k] * w_pow[d - k - 1]
                p_w += a * term
                q_w += b * term
        return p_z, p_w, q_z, q_w

    def apply(self, p: SpherePoint) -> SpherePoint:
        return apply(self, p)

    def affine(self, z: complex) -> complex:
        """P(z,1)/Q(z,1); caller keeps z away from poles"""
        num, den = self.forms(z, 1.0 + 0j)
        return num / den

    def affine_derivative(self, z: complex) -> complex:
        return planar_derivative(self, z)

    def apply_many(self, nums: np.ndarray, dens: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorised apply on arrays of normalized homogeneous pairs"""
        d = self.degree
        acc_p = np.full(nums.shape, self.p_coeffs[d], dtype=complex)
        acc_q = np.full(nums.shape, self.q_coeffs[d], dtype=complex)
        w_power = np.ones(nums.shape, dtype=complex)
        for k in range(d - 1, -1, -1):
            w_power = w_power * dens
            acc_p = acc_p * nums + self.p_coeffs[k] * w_power
            acc_q = acc_q * nums + self.q_coeffs[k] * w_power
        if np.any((np.abs(acc_p) < INDETERMINATE_FLOOR) & (np.abs(acc_q) < INDETERMINATE_FLOOR)):
            raise IndeterminateEvaluationError("Both forms vanished in a vectorised evaluation")
        return normalize_arrays(acc_p, acc_q)

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner, of degree self.degree * inner.degree"""
        if self.degree * inner.degree > MAX_DEGREE * MAX_DEGREE:
            raise InvalidParameterError("Composition degree beyond the supported range")
        d = self.degree
        inner_p = np.array(inner.p_coeffs, dtype=complex)
        inner_q = np.array(inner.q_coeffs, dtype=complex)
        p_powers = [np.array([1.0 + 0j])]
        q_powers = [np.array([1.0 + 0j])]
        for _ in range(d):
            p_powers.append(np.convolve(p_powers[-1], inner_p))
            q_powers.append(np.convolve(q_powers[-1], inner_q))
        size = d * inner.degree + 1
        new_p = np.zeros(size, dtype=complex)
        new_q = np.zeros(size, dtype=complex)
        for k in range(d + 1):
            monomial = np.convolve(p_powers[k], q_powers[d - k])
            new_p += self.p_coeffs[k] * monomial
            new_q += self.q_coeffs[k] * monomial
        return RationalMap(size - 1, tuple(new_p), tuple(new_q))


def normalize_arrays(nums: np.ndarray, dens: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    larger_num = np.abs(nums) >= np.abs(dens)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio_den = dens / nums
        ratio_num = nums / dens
    new_num = np.where(larger_num, 1.0 + 0j, ratio_num)
    new_den = np.where(larger_num, ratio_den, 1.0 + 0j)
    return new_num, new_den


def apply(f: RationalMap, p: SpherePoint) -> SpherePoint:
    """Normalized image [P(z,w) : Q(z,w)], exact at infinity and at poles"""
    num, den = f.forms(p.num, p.den)
    if abs(num) < INDETERMINATE_FLOOR and abs(den) < INDETERMINATE_FLOOR:
        raise IndeterminateEvaluationError(f"Both forms vanished at {p!r}")
    return SpherePoint(num, den)


def planar_derivative(f: RationalMap, z: Union[complex, SpherePoint]) -> complex:
    """Derivative of the affine-chart expression P(z,1)/Q(z,1)"""
    if isinstance(z, SpherePoint):
        z = z.to_complex()
    z = complex(z)
    num, den = f.forms(z, 1.0 + 0j)
    if abs(den) < INDETERMINATE_FLOOR:
        raise ChartError(f"{z} is a pole; use the spherical derivative")
    p_z, _, q_z, _ = f.partials(z, 1.0 + 0j)
    return (p_z * den - num * q_z) / (den * den)


def spherical_derivative_norm(f: RationalMap, p: SpherePoint) -> float:
    """|det DF| (|z|^2+|w|^2) / (d (|P|^2+|Q|^2)), continuous across infinity"""
    z, w = p.num, p.den
    num, den = f.forms(z, w)
    p_z, p_w, q_z, q_w = f.partials(z, w)
    jacobian = p_z * q_w - p_w * q_z
    source = abs(z) ** 2 + abs(w) ** 2
    target = abs(num) ** 2 + abs(den) ** 2
    return abs(jacobian) * source / (f.degree * target)


def log_spherical_derivative(f: RationalMap, p: SpherePoint) -> float:
    value = spherical_derivative_norm(f, p)
    return math.log(value) if value > 0.0 else -math.inf


def chart_at(point: SpherePoint) -> RationalMap:
    """Mobius chart sending the point to 0: z - a for finite a, 1/z at infinity"""
    if point.is_infinity:
        return RationalMap.mobius(0, 1, 1, 0)
    return RationalMap.mobius(1, -point.to_complex(), 0, 1)


def chart_inverse(point: SpherePoint) -> RationalMap:
    if point.is_infinity:
        return RationalMap.mobius(0, 1, 1, 0)
    return RationalMap.mobius(1, point.to_complex(), 0, 1)
