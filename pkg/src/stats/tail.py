"""
Hill tail-index estimation and the direct laminar-duration mechanism.
"""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..exceptions import InvalidParameterError, UndefinedStatisticError

BOOTSTRAP_ROUNDS = 200
CI_PERCENTILES = (5.0, 95.0)


@dataclass
class TailEstimate:
    sample_count: int
    k: int
    alpha: float
    ci_low: float
    ci_high: float

    def to_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "k": self.k,
            "alpha": self.alpha,
            "ci": [self.ci_low, self.ci_high],
        }


def _hill(descending: np.ndarray, k: int) -> float:
    logs = np.log(descending[:k]) - math.log(descending[k])
    mean = logs.mean()
    if mean <= 0.0:
        raise UndefinedStatisticError("Top order statistics are constant; tail index undefined")
    return float(1.0 / mean)


def hill_tail_index(
    samples, k: int, bootstrap: int = BOOTSTRAP_ROUNDS, seed: int = 0
) -> TailEstimate:
    """Hill estimator on the top-k order statistics with a bootstrap 90% interval"""
    values = np.asarray(samples, dtype=float)
    n = values.size
    if k < 10 or k >= n / 2:
        raise InvalidParameterError(f"Need 10 <= k < n/2, got k={k}, n={n}")
    if np.any(values <= 0):
        raise InvalidParameterError("Hill estimator needs positive samples")
    alpha = _hill(np.sort(values)[::-1], k)

    rng = np.random.default_rng(seed)
    estimates = []
    for _ in range(bootstrap):
        resample = np.sort(rng.choice(values, size=n, replace=True))[::-1]
        try:
            estimates.append(_hill(resample, k))
        except UndefinedStatisticError:
            continue
    if estimates:
        low, high = np.percentile(estimates, CI_PERCENTILES)
    else:
        low = high = alpha
    return TailEstimate(n, k, alpha, float(low), float(high))


def tail_frame(samples) -> pd.DataFrame:
    """rank, value in decreasing order"""
    ordered = np.sort(np.asarray(samples))[::-1]
    return pd.DataFrame({"rank": np.arange(1, ordered.size + 1), "value": ordered})


def mechanism_durations(p0: float, samples: int, seed: int = 0) -> np.ndarray:
    """Durations 2^(N+U) with P(N = n) = p0^n (1 - p0) and U uniform on [0, 1)"""
    if not 0.0 < p0 < 1.0:
        raise InvalidParameterError("Mechanism needs 0 < p0 < 1")
    rng = np.random.default_rng(seed)
    runs = rng.geometric(1.0 - p0, size=samples) - 1
    return np.exp2(runs + rng.uniform(0.0, 1.0, size=samples))


def predicted_tail_index(p0: float) -> float:
    """log2(1/p0)"""
    return math.log(1.0 / p0) / math.log(2.0)


def pareto_samples(alpha: float, samples: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (1.0 - rng.uniform(0.0, 1.0, size=samples)) ** (-1.0 / alpha)


def default_k(sample_count: int) -> int:
    """Top 10% of the sample, at least 10"""
    return max(10, min(sample_count // 10, sample_count // 2 - 1))
