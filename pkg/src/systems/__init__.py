"""
Concrete two-map systems and their hypothesis checks
"""

from .catalog import Family, IfsSystem, SpecialPoint, make_critical, make_logistic, make_mobius, make_system
from .hypotheses import HypothesisReport, check_hypotheses, lyapunov_at_origin

__all__ = [
    "Family",
    "IfsSystem",
    "SpecialPoint",
    "make_critical",
    "make_mobius",
    "make_logistic",
    "make_system",
    "HypothesisReport",
    "check_hypotheses",
    "lyapunov_at_origin",
]
