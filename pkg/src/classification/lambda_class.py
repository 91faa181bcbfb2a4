"""
Classification of the closure of {2^m lambda^n : m, n >= 0}.

The four cases come from two diagnostics:

  angle    arg(lambda)/2pi rational or not
  modulus  whether the log-moduli {m ln2 + n ln|lambda|} are dense in R

            | moduli dense   | moduli discrete
  ----------+----------------+--------------------------
  irrational| DenseInPlane   | ConcentricCircles(step)
  rational  | RadialLines(k) | Discrete(m, n)

This table is our reading of the case split; it is exact for the rational tests
and decided at floating point by continued-fraction convergents.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from ..exceptions import InvalidParameterError
from .continued_fraction import rational_approx

LN2 = math.log(2.0)
OVERFLOW_GUARD = 1e100

DENSE = "DenseInPlane"
RADIAL = "RadialLines"
CIRCLES = "ConcentricCircles"
DISCRETE = "Discrete"


@dataclass(frozen=True)
class LambdaClass:
    kind: str
    k: Optional[int] = None
    log_step: Optional[float] = None
    m: Optional[int] = None
    n: Optional[int] = None
    angle_rational: Optional[Tuple[int, int]] = None
    modulus_ratio: Optional[Tuple[int, int]] = None
    modulus_dense: bool = False
    scale_sign: int = 1
    diagnostics: Dict[str, float] = field(default_factory=dict, compare=False)

    def to_dict(self, lam: complex) -> dict:
        payload = {
            "lambda": [lam.real, lam.imag],
            "class": self.kind,
            "angle": (
                {"rational": list(self.angle_rational)}
                if self.angle_rational is not None
                else {"rational": None}
            ),
            "modulus": {
                "dependent": self.modulus_ratio is not None and not self.modulus_dense,
                "ratio": list(self.modulus_ratio) if self.modulus_ratio is not None else None,
                "dense": self.modulus_dense,
            },
            "scale_sign": self.scale_sign,
            "diagnostics": dict(self.diagnostics),
        }
        if self.kind == RADIAL:
            payload["k"] = self.k
        elif self.kind == CIRCLES:
            payload["log_step"] = self.log_step
        elif self.kind == DISCRETE:
            payload["m"] = self.m
            payload["n"] = self.n
        return payload


def classify_lambda(lam: complex, qmax: int = 50, tol: float = 1e-9, scale_sign: int = 1) -> LambdaClass:
    """Classify cl{2^(scale_sign m) lambda^n}; scale_sign=-1 gives the set used for |lambda| > 1"""
    lam = complex(lam)
    if lam == 0:
        raise InvalidParameterError("lambda must be nonzero")
    if scale_sign not in (1, -1):
        raise InvalidParameterError("scale_sign must be +1 or -1")

    turn = (math.atan2(lam.imag, lam.real) / (2.0 * math.pi)) % 1.0
    ratio = math.log(abs(lam)) / LN2
    angle = rational_approx(turn, qmax, tol)
    modulus = rational_approx(ratio, qmax, tol)
    dense = modulus is None and scale_sign * ratio < 0.0
    diagnostics = {"angle_turns": turn, "log2_modulus": ratio}

    common = dict(
        angle_rational=angle,
        modulus_ratio=modulus,
        modulus_dense=dense,
        scale_sign=scale_sign,
        diagnostics=diagnostics,
    )
    if dense:
        if angle is None:
            result = LambdaClass(DENSE, **common)
        else:
            result = LambdaClass(RADIAL, k=angle[1], **common)
    elif angle is None:
        step = LN2 / modulus[1] if modulus is not None else None
        result = LambdaClass(CIRCLES, log_step=step, **common)
    else:
        m, n = _unit_relation(modulus, angle[1], scale_sign)
        result = LambdaClass(DISCRETE, m=m, n=n, **common)
    logger.debug(f"lambda={lam} classified as {result.kind}")
    return result


def _unit_relation(modulus: Optional[Tuple[int, int]], angle_period: int, scale_sign: int):
    """Minimal (m, n) with 2^(sign m) |lambda|^n = 1 and lambda^n real positive"""
    if modulus is None:
        return None, None
    p, q = modulus
    if scale_sign * p > 0:
        return None, None
    n = q * angle_period // math.gcd(q, angle_period)
    return abs(p) * n // q, n


def closure_cloud(lam: complex, mmax: int, nmax: int, scale_sign: int = 1) -> np.ndarray:
    """All 2^(sign m) lambda^n for 0 <= m <= mmax, 0 <= n <= nmax, n-major, overflow guarded"""
    if mmax < 1 or nmax < 1:
        raise InvalidParameterError("Cloud bounds must be >= 1")
    lam = complex(lam)
    powers_of_two = 2.0 ** (scale_sign * np.arange(mmax + 1, dtype=float))
    with np.errstate(over="ignore", invalid="ignore"):
        powers_of_lambda = lam ** np.arange(nmax + 1)
        cloud = (powers_of_lambda[:, None] * powers_of_two[None, :]).ravel()
    keep = np.isfinite(cloud) & (np.abs(cloud) <= OVERFLOW_GUARD)
    return cloud[keep]


def renormalize_octave(values: np.ndarray) -> np.ndarray:
    """Divide each nonzero value by the power of two nearest its modulus"""
    values = values[values != 0]
    exponents = np.round(np.log2(np.abs(values)))
    return values * np.exp2(-exponents)


def fundamental_cloud(lam: complex, nmax: int) -> np.ndarray:
    """lambda^n rescaled into the octave around the unit circle, computed in log coordinates"""
    lam = complex(lam)
    n = np.arange(nmax + 1, dtype=float)
    log2_radius = n * (math.log(abs(lam)) / LN2)
    log2_radius -= np.round(log2_radius)
    angle = n * math.atan2(lam.imag, lam.real)
    return np.exp2(log2_radius) * np.exp(1j * angle)


def cloud_oracle(
    lam: complex,
    result: LambdaClass,
    mmax: int = 60,
    nmax: int = 60,
    resolution: float = 0.05,
    dense_nmax: int = 400_000,
    line_tol: float = 1e-9,
) -> Dict[str, object]:
    """Brute-force geometric check of a classification against the materialized cloud"""
    if result.kind == DENSE:
        return _dense_check(fundamental_cloud(lam, dense_nmax), resolution)

    cloud = renormalize_octave(closure_cloud(lam, mmax, nmax, result.scale_sign))
    if result.kind == RADIAL:
        step = 2.0 * math.pi / result.k
        angles = np.angle(cloud)
        offset = angles - step * np.round(angles / step)
        distance = np.where(np.abs(offset) < math.pi / 2, np.abs(cloud) * np.abs(np.sin(offset)), np.abs(cloud))
        worst = float(distance.max())
        return {"passed": worst <= line_tol, "max_distance": worst, "points": int(cloud.size)}
    if result.kind == CIRCLES:
        if result.log_step is None:
            return {"passed": True, "max_distance": None, "points": int(cloud.size)}
        logs = np.log(np.abs(cloud))
        offset = logs - result.log_step * np.round(logs / result.log_step)
        worst = float(np.abs(offset).max())
        return {"passed": worst <= line_tol, "max_distance": worst, "points": int(cloud.size)}

    rounded = np.unique(np.round(cloud.real / line_tol) + 1j * np.round(cloud.imag / line_tol))
    if result.n is None:
        bound = None
    else:
        bound = result.n if not result.m else result.m * result.n
    distinct = int(rounded.size)
    return {"passed": bound is None or distinct <= bound, "distinct": distinct, "bound": bound}


def _dense_check(cloud: np.ndarray, resolution: float, inner: float = 0.75, outer: float = 1.33):
    radius = np.abs(cloud)
    inside = cloud[(radius >= inner) & (radius <= outer)]
    radial_width = resolution / 2.0
    angular_width = resolution / (2.0 * outer)
    radial_cells = int(math.ceil((outer - inner) / radial_width))
    angular_cells = int(math.ceil(2.0 * math.pi / angular_width))
    rows = np.minimum(((np.abs(inside) - inner) / ((outer - inner) / radial_cells)).astype(int), radial_cells - 1)
    cols = np.minimum(
        ((np.angle(inside) + math.pi) / (2.0 * math.pi / angular_cells)).astype(int), angular_cells - 1
    )
    occupied = np.zeros((radial_cells, angular_cells), dtype=bool)
    occupied[rows, cols] = True
    empty = int((~occupied).sum())
    return {"passed": empty == 0, "empty_cells": empty, "cells": radial_cells * angular_cells, "points": int(inside.size)}
