"""Skew-product engine: symbol streams, charts, orbits and observers"""

from .charts import ChartAtlas, atlas_for
from .observers import MembershipObserver, Observer, TraceObserver, merge_all
from .orbit import OrbitEvent, OrbitState, finite_time_lyapunov, replay, run_orbit, step_skew, word_apply
from .symbols import SymbolStream

__all__ = [
    "ChartAtlas",
    "atlas_for",
    "Observer",
    "TraceObserver",
    "MembershipObserver",
    "merge_all",
    "OrbitEvent",
    "OrbitState",
    "step_skew",
    "run_orbit",
    "replay",
    "finite_time_lyapunov",
    "word_apply",
    "SymbolStream",
]
