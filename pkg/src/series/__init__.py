"""
Truncated power series and linearization algebra at the common fixed point
"""

from .linearization import (
    DEFAULT_ORDER,
    PROBE_ORDER,
    koenigs_linearizer,
    linearization_residual,
    taylor_at_zero,
)
from .truncated import TruncatedSeries, compose, reversion

__all__ = [
    "TruncatedSeries",
    "compose",
    "reversion",
    "taylor_at_zero",
    "koenigs_linearizer",
    "linearization_residual",
    "DEFAULT_ORDER",
    "PROBE_ORDER",
]
