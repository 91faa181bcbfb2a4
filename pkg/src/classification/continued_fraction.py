"""
Continued-fraction convergents as a floating-point rationality test.
"""

import math
from typing import Iterator, Optional, Tuple

MAX_TERMS = 64


def convergents(x: float) -> Iterator[Tuple[int, int]]:
    """Successive convergents p/q of x, in lowest terms"""
    a = math.floor(x)
    remainder = x - a
    h_prev, h = 1, a
    k_prev, k = 0, 1
    yield h, k
    for _ in range(MAX_TERMS):
        if remainder < 1e-15:
            return
        x = 1.0 / remainder
        a = math.floor(x)
        remainder = x - a
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield h, k


def rational_approx(x: float, qmax: int = 50, tol: float = 1e-9) -> Optional[Tuple[int, int]]:
    """First convergent p/q with q <= qmax and |x - p/q| <= tol, or None"""
    if qmax < 1 or tol <= 0:
        raise ValueError("qmax must be >= 1 and tol > 0")
    for p, q in convergents(x):
        if q > qmax:
            return None
        if abs(x - p / q) <= tol:
            return p, q
    return None
