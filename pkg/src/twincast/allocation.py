"""Allocation decisions and the provisioning quality metrics.

A forecast becomes an allocation through a pass-through policy (optionally
scaled and floored).  Each (actual, allocated) trace is then scored per
timestep:

    efficiency        min(actual / allocated, 1)
    wastage           max((allocated - actual) / allocated, 0)
    utilization       actual / allocated
    over-provisioning max(allocated - actual, 0)

plus MAE/RMSE of the allocation against the true demand.  Zero-allocation
timesteps follow a pinned rule: with zero demand they count as perfectly
efficient; with positive demand they score zero efficiency and their
utilization is reported as +inf and excluded from the mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .baselines import percentile
from .errors import ShapeError

RADAR_HIGHER_IS_BETTER = {
    "mae": False,
    "rmse": False,
    "mean_efficiency": True,
    "mean_wastage": False,
    "mean_utilization": True,
    "mean_over_provisioning": False,
}


@dataclass(frozen=True)
class AllocationTrace:
    """Per-timestep true demand and allocated capacity for one policy."""

    policy_name: str
    actual: np.ndarray
    allocated: np.ndarray

    def __post_init__(self):
        actual = np.asarray(self.actual, dtype=np.float64).ravel()
        allocated = np.asarray(self.allocated, dtype=np.float64).ravel()
        if actual.shape != allocated.shape:
            raise ShapeError(
                f"actual and allocated lengths differ: {actual.size} vs {allocated.size}"
            )
        if actual.size == 0:
            raise ValueError("trace must contain at least one timestep")
        if not (np.all(np.isfinite(actual)) and np.all(np.isfinite(allocated))):
            raise ValueError("trace values must be finite")
        if np.any(actual < 0) or np.any(allocated < 0):
            raise ValueError("trace values must be non-negative")
        object.__setattr__(self, "actual", actual)
        object.__setattr__(self, "allocated", allocated)

    def __len__(self) -> int:
        return self.actual.size


@dataclass(frozen=True)
class MetricsReport:
    """Aggregate forecast-error and allocation metrics for one policy."""

    mae: float
    rmse: float
    mean_efficiency: float
    mean_wastage: float
    mean_utilization: float
    mean_over_provisioning: float
    efficiency_median: float
    efficiency_quartiles: tuple[float, float]
    efficiency_min: float
    efficiency_max: float
    under_provision_count: int
    n_timesteps: int

    def to_dict(self) -> dict:
        return {
            "mae": self.mae,
            "rmse": self.rmse,
            "mean_efficiency": self.mean_efficiency,
            "mean_wastage": self.mean_wastage,
            "mean_utilization": self.mean_utilization,
            "mean_over_provisioning": self.mean_over_provisioning,
            "efficiency_median": self.efficiency_median,
            "efficiency_q1": self.efficiency_quartiles[0],
            "efficiency_q3": self.efficiency_quartiles[1],
            "efficiency_min": self.efficiency_min,
            "efficiency_max": self.efficiency_max,
            "under_provision_count": self.under_provision_count,
            "n_timesteps": self.n_timesteps,
        }


def allocate_from_forecast(forecast, floor: float = 0.0, multiplier: float = 1.0) -> np.ndarray:
    """Turn a forecast into an allocation: ``max(multiplier * f, floor)``.

    The default is the pass-through policy (multiplier 1, floor 0), which
    also clips negative forecasts to zero.
    """
    arr = np.asarray(forecast, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError("forecast contains non-finite values")
    if floor < 0:
        raise ValueError("floor must be non-negative")
    if multiplier <= 0:
        raise ValueError("multiplier must be positive")
    return np.maximum(multiplier * arr, floor)


def forecast_errors(predicted, actual) -> tuple[float, float]:
    """Mean absolute error and root mean squared error of a forecast."""
    p = np.asarray(predicted, dtype=np.float64).ravel()
    a = np.asarray(actual, dtype=np.float64).ravel()
    if p.shape != a.shape:
        raise ShapeError(f"predicted and actual lengths differ: {p.size} vs {a.size}")
    if p.size == 0:
        raise ValueError("need at least one prediction")
    residual = p - a
    mae = float(np.mean(np.abs(residual)))
    rmse = float(np.sqrt(np.mean(residual**2)))
    return mae, rmse


def per_timestep_metrics(trace: AllocationTrace) -> dict[str, np.ndarray]:
    """Per-timestep efficiency, wastage, utilization, and over-provisioning."""
    actual, allocated = trace.actual, trace.allocated
    zero = allocated == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = actual / allocated
    efficiency = np.where(zero, np.where(actual == 0, 1.0, 0.0), np.minimum(ratio, 1.0))
    wastage = np.where(zero, 0.0, np.maximum((allocated - actual) / np.where(zero, 1.0, allocated), 0.0))
    utilization = np.where(zero, np.where(actual == 0, 1.0, np.inf), ratio)
    over_provisioning = np.maximum(allocated - actual, 0.0)
    return {
        "efficiency": efficiency,
        "wastage": wastage,
        "utilization": utilization,
        "over_provisioning": over_provisioning,
    }


def allocation_metrics(trace: AllocationTrace) -> MetricsReport:
    """Score one trace: per-timestep metrics, their means, and the
    five-number summary of efficiency (linear-interpolation quantiles)."""
    per = per_timestep_metrics(trace)
    mae, rmse = forecast_errors(trace.allocated, trace.actual)
    util = per["utilization"]
    finite_util = util[np.isfinite(util)]
    mean_util = float(finite_util.mean()) if finite_util.size else math.inf
    eff = per["efficiency"]
    return MetricsReport(
        mae=mae,
        rmse=rmse,
        mean_efficiency=float(per["efficiency"].mean()),
        mean_wastage=float(per["wastage"].mean()),
        mean_utilization=mean_util,
        mean_over_provisioning=float(per["over_provisioning"].mean()),
        efficiency_median=percentile(eff, 50.0),
        efficiency_quartiles=(percentile(eff, 25.0), percentile(eff, 75.0)),
        efficiency_min=float(eff.min()),
        efficiency_max=float(eff.max()),
        under_provision_count=int(np.sum(trace.actual > trace.allocated)),
        n_timesteps=len(trace),
    )


def radar_normalize(reports: list[tuple[str, MetricsReport]]) -> dict[str, dict[str, float]]:
    """Min-max normalize each metric across policies onto [0, 1].

    Lower-is-better metrics (errors, wastage, over-provisioning) are
    inverted so that 1.0 always marks the best policy; when all policies tie
    on a metric, every one of them scores 1.0.
    """
    if len(reports) < 2:
        raise ValueError("radar normalization needs at least 2 policies")
    scores: dict[str, dict[str, float]] = {name: {} for name, _ in reports}
    for metric, higher_better in RADAR_HIGHER_IS_BETTER.items():
        vals = {name: getattr(report, metric) for name, report in reports}
        lo, hi = min(vals.values()), max(vals.values())
        for name, v in vals.items():
            if hi == lo:
                score = 1.0
            elif higher_better:
                score = (v - lo) / (hi - lo)
            else:
                score = (hi - v) / (hi - lo)
            scores[name][metric] = score
    return scores
