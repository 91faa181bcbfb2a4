"""Empirical statistics over orbit ensembles"""

from .circle import CANDIDATE_SETS, CircleCurve, invariant_candidate_check, unit_circle_curve
from .coverage import CoverageReport, coverage_probe
from .measure import EqualAreaGrid, HistogramObserver, SphereHistogram, empirical_cesaro_measure
from .nonnormal import NonNormalityReport, non_normality_probe
from .occupation import OccupationObserver, OccupationResult, occupation_fraction, occupation_trial
from .returns import ReturnTimeSample, TailScaling, kac_return_times, running_mean_shifts, tail_scaling
from .sojourn import (
    SojournRecord,
    decompose_membership,
    occupation_identity_check,
    sojourn_decomposition,
    sojourn_frequency_bound,
)
from .tail import TailEstimate, hill_tail_index, mechanism_durations

__all__ = [
    "CANDIDATE_SETS",
    "CircleCurve",
    "invariant_candidate_check",
    "unit_circle_curve",
    "CoverageReport",
    "coverage_probe",
    "EqualAreaGrid",
    "HistogramObserver",
    "SphereHistogram",
    "empirical_cesaro_measure",
    "NonNormalityReport",
    "non_normality_probe",
    "OccupationObserver",
    "OccupationResult",
    "occupation_fraction",
    "occupation_trial",
    "ReturnTimeSample",
    "TailScaling",
    "kac_return_times",
    "running_mean_shifts",
    "tail_scaling",
    "SojournRecord",
    "decompose_membership",
    "occupation_identity_check",
    "sojourn_decomposition",
    "sojourn_frequency_bound",
    "TailEstimate",
    "hill_tail_index",
    "mechanism_durations",
]
