"""
f1 on the unit circle in the coordinate w = z + 1, where f0 becomes w -> w^2 and
f1 becomes w -> (lambda (w - 1) + w^2) / w^2.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from ..exceptions import InvalidParameterError

MEMBERSHIP_TOLERANCE = 1e-9
CURVE_COLUMNS = ["theta", "re", "im", "abs"]
MIN_SAMPLES = 360


def _root(k: int, n: int) -> complex:
    return cmath.exp(1j * math.pi * k / n)


# w-coordinates, each read as e^(i pi k / n)
CANDIDATE_SETS: Tuple[Tuple[str, Tuple[complex, ...]], ...] = (
    ("{-1}", (-1 + 0j,)),
    ("{-i, -1}", (-1j, -1 + 0j)),
    ("{i, -1}", (1j, -1 + 0j)),
    ("{e^(2pi i/3), e^(4pi i/3)}", (_root(2, 3), _root(4, 3))),
    ("{i, -1, e^(pi i/4)}", (1j, -1 + 0j, _root(1, 4))),
    ("{i, -1, e^(7pi i/4)}", (1j, -1 + 0j, _root(7, 4))),
    ("{-1, -i, i}", (-1 + 0j, -1j, 1j)),
    ("{e^(2pi i/3), e^(4pi i/3), e^(pi i/3)}", (_root(2, 3), _root(4, 3), _root(1, 3))),
    ("{e^(2pi i/3), e^(4pi i/3), e^(5pi i/3)}", (_root(2, 3), _root(4, 3), _root(5, 3))),
    ("{e^(2pi i/7), e^(4pi i/7), e^(8pi i/7)}", (_root(2, 7), _root(4, 7), _root(8, 7))),
    ("{e^(6pi i/7), e^(12pi i/7), e^(10pi i/7)}", (_root(6, 7), _root(12, 7), _root(10, 7))),
)


def f1_on_w(lam: complex, w):
    """(lambda (w - 1) + w^2) / w^2; works on scalars and arrays"""
    return (lam * (w - 1) + w * w) / (w * w)


@dataclass
class CircleCurve:
    frame: pd.DataFrame
    crossings: int

    def summary(self) -> dict:
        return {"samples": len(self.frame), "crossings": self.crossings}


def unit_circle_curve(lam: complex, samples: int = 1440) -> CircleCurve:
    """Image of |w| = 1 under f1 and the sign changes of |f1(w)| - 1 away from w = 1"""
    if samples < MIN_SAMPLES:
        raise InvalidParameterError(f"Need at least {MIN_SAMPLES} samples, got {samples}")
    lam = complex(lam)
    theta = 2.0 * np.pi * np.arange(samples) / samples
    w = np.exp(1j * theta)
    w[0] = 1.0
    image = f1_on_w(lam, w)
    modulus = np.abs(image)
    frame = pd.DataFrame({"theta": theta, "re": image.real, "im": image.imag, "abs": modulus})
    return CircleCurve(frame, _sign_changes(modulus[1:] - 1.0))


def _sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _member(value: complex, targets: List[complex]) -> bool:
    if not cmath.isfinite(value):
        return True
    return any(abs(value - t) <= MEMBERSHIP_TOLERANCE for t in targets)


def invariant_candidate_check(lam: complex) -> List[Dict[str, object]]:
    """For each candidate set, whether f1 maps it into itself together with {1, infinity}"""
    lam = complex(lam)
    if abs(lam) <= 1e-14 or abs(lam - 1.0) <= 1e-14:
        raise InvalidParameterError(f"lambda must avoid 0 and 1, got {lam}")
    rows = []
    for name, elements in CANDIDATE_SETS:
        targets = list(elements) + [1.0 + 0j]
        images = [f1_on_w(lam, w) for w in elements]
        escaped = [w for w, image in zip(elements, images) if not _member(image, targets)]
        rows.append(
            {
                "set": name,
                "invariant": not escaped,
                "images": [[image.real, image.imag] for image in images],
                "escaping_elements": [[w.real, w.imag] for w in escaped],
            }
        )
    return rows
