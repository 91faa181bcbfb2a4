"""
Observer contract for orbit runs.

An observer owns private state, sees every OrbitEvent of one trial and can be
merged with an observer of the same kind from another trial. Merges must be
associative; trial results are merged in trial-index order.
"""

import math
from functools import reduce
from typing import List, Optional, Protocol, Sequence, TypeVar, runtime_checkable

import pandas as pd

from .orbit import OrbitEvent

TRACE_COLUMNS = ["step", "symbol", "re", "im", "abs_z", "chordal_to_zero"]

O = TypeVar("O", bound="Observer")


@runtime_checkable
class Observer(Protocol):
    def observe(self, event: OrbitEvent) -> None:
        ...

    def merge(self: O, other: O) -> O:
        ...


def merge_all(observers: Sequence[O]) -> O:
    """Left fold of merge in the given order"""
    if not observers:
        raise ValueError("Nothing to merge")
    return reduce(lambda left, right: left.merge(right), observers)


class TraceObserver:
    """Orbit trace rows, capped at `limit` events"""

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.rows: List[tuple] = []

    def observe(self, event: OrbitEvent) -> None:
        if self.limit is not None and len(self.rows) >= self.limit:
            return
        point = event.point
        if point.is_infinity:
            re = im = modulus = math.inf
        else:
            z = point.to_complex()
            re, im, modulus = z.real, z.imag, abs(z)
        self.rows.append((event.step, event.symbol, re, im, modulus, point.chordal_to_zero()))

    def merge(self, other: "TraceObserver") -> "TraceObserver":
        merged = TraceObserver(self.limit)
        merged.rows = self.rows + other.rows
        return merged

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=TRACE_COLUMNS)


class MembershipObserver:
    """Per-step membership bits for a predicate on events"""

    def __init__(self, predicate):
        self.predicate = predicate
        self.bits: List[bool] = []

    def observe(self, event: OrbitEvent) -> None:
        self.bits.append(bool(self.predicate(event)))

    def merge(self, other: "MembershipObserver") -> "MembershipObserver":
        merged = MembershipObserver(self.predicate)
        merged.bits = self.bits + other.bits
        return merged
