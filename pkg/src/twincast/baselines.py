"""Static bandwidth provisioning forecasters.

Two one-shot baselines fit a single constant on the training distribution
and emit it for every future step: mean plus two population standard
deviations, and the 95th percentile.  Both ignore temporal order entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor

import numpy as np

from .errors import EstimationError

METHOD_MEAN2SIGMA = "mean2sigma"
METHOD_P95 = "p95"


@dataclass(frozen=True)
class StaticForecast:
    """A constant forecast over a fixed horizon."""

    constant: float
    horizon: int
    method: str

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be a positive integer")
        if self.method not in (METHOD_MEAN2SIGMA, METHOD_P95):
            raise ValueError(f"unknown method {self.method!r}")

    def values(self) -> np.ndarray:
        """The forecast vector: ``constant`` repeated ``horizon`` times."""
        return np.full(self.horizon, self.constant, dtype=np.float64)


def _check_sample(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EstimationError("cannot estimate from an empty sample")
    if not np.all(np.isfinite(arr)):
        raise EstimationError("sample contains non-finite values")
    return arr


def percentile(values, q: float) -> float:
    """Linear-interpolation percentile of a sample.

    Sorts ascending and evaluates at the zero-based fractional rank
    ``(q / 100) * (len - 1)``, interpolating between the two nearest order
    statistics.
    """
    arr = _check_sample(values)
    if not 0.0 <= q <= 100.0:
        raise ValueError("q must lie in [0, 100]")
    s = np.sort(arr)
    rank = (q / 100.0) * (s.size - 1)
    lo = floor(rank)
    hi = ceil(rank)
    frac = rank - lo
    return float(s[lo] + frac * (s[hi] - s[lo]))


def baseline_mean2sigma(train_targets, horizon: int) -> StaticForecast:
    """Mean plus twice the population standard deviation of the training
    targets, held constant over the horizon."""
    arr = _check_sample(train_targets)
    mu = float(arr.mean())
    sigma = float(np.sqrt(np.mean((arr - mu) ** 2)))
    return StaticForecast(mu + 2.0 * sigma, horizon, METHOD_MEAN2SIGMA)


def baseline_p95(train_targets, horizon: int) -> StaticForecast:
    """95th percentile of the training targets, held constant over the
    horizon; covers demand in roughly 95% of training instances."""
    return StaticForecast(percentile(train_targets, 95.0), horizon, METHOD_P95)
