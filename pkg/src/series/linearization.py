"""
Taylor expansions at the common fixed point, Koenigs linearizers and the
simultaneous-linearization residual.
"""

from typing import Optional

from loguru import logger

from ..exceptions import KoenigsRegimeError, NotExpandableError, OrderMismatchError
from ..sphere.rational_map import RationalMap
from .truncated import TruncatedSeries, compose

DEFAULT_ORDER = 12
PROBE_ORDER = 20
REGIME_TOLERANCE = 1e-12


def taylor_at_zero(f: RationalMap, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Expansion of P(z,1)/Q(z,1) at 0 by power-series long division"""
    numerator = f.p_coeffs
    denominator = f.q_coeffs
    scale = max(abs(c) for c in numerator + denominator)
    if abs(denominator[0]) <= REGIME_TOLERANCE * scale:
        raise NotExpandableError("Map has a pole at 0")
    if abs(numerator[0]) > REGIME_TOLERANCE * scale:
        raise NotExpandableError(f"Map does not fix 0 (f(0) = {numerator[0] / denominator[0]})")

    def coefficient(coeffs, power):
        return coeffs[power] if power < len(coeffs) else 0j

    values = [0j] * (order + 1)
    for n in range(1, order + 1):
        acc = coefficient(numerator, n)
        for k in range(1, n + 1):
            acc -= coefficient(denominator, k) * values[n - k]
        values[n] = acc / denominator[0]
    return TruncatedSeries(order, tuple(values[1:]))


def koenigs_linearizer(f: TruncatedSeries, order: Optional[int] = None) -> TruncatedSeries:
    """Tangent-to-identity phi with phi o f = f'(0) phi, solved order by order"""
    order = f.order if order is None else order
    if order > f.order:
        raise OrderMismatchError(f"Cannot linearize to order {order} from a series of order {f.order}")
    f = f.truncate(order)
    multiplier = f.multiplier
    if abs(multiplier) <= REGIME_TOLERANCE or abs(abs(multiplier) - 1.0) <= REGIME_TOLERANCE:
        raise KoenigsRegimeError(f"Multiplier {multiplier} is outside the Koenigs regime")

    f_powers = f.powers(order)
    phi = [0j] * (order + 1)
    phi[1] = 1.0 + 0j
    for n in range(2, order + 1):
        known = sum(phi[j] * f_powers[j][n] for j in range(1, n))
        phi[n] = -known / (multiplier ** n - multiplier)
    logger.debug(f"Koenigs linearizer solved to order {order} for multiplier {multiplier}")
    return TruncatedSeries(order, tuple(phi[1:]))


def linearization_residual(phi: TruncatedSeries, g: TruncatedSeries, multiplier: complex) -> TruncatedSeries:
    """phi o g - multiplier * phi; the zero series means phi linearizes g"""
    return compose(phi, g) - phi.scale(multiplier)
