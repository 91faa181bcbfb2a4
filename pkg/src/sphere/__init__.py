"""
Sphere arithmetic: homogeneous points, rational maps and the chordal metric
"""

from .extended import ExtendedComplex
from .point import INFINITY, MINUS_ONE, ZERO, SpherePoint, chordal_distance, normalize
from .rational_map import (
    RationalMap,
    apply,
    chart_at,
    chart_inverse,
    log_spherical_derivative,
    planar_derivative,
    spherical_derivative_norm,
)

__all__ = [
    "ExtendedComplex",
    "SpherePoint",
    "RationalMap",
    "ZERO",
    "INFINITY",
    "MINUS_ONE",
    "normalize",
    "chordal_distance",
    "apply",
    "planar_derivative",
    "spherical_derivative_norm",
    "log_spherical_derivative",
    "chart_at",
    "chart_inverse",
]
