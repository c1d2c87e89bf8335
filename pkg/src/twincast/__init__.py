"""twincast: digital-twin traffic forecasting and provisioning comparison.

Train a from-scratch bidirectional LSTM on multivariate network KPI series,
benchmark it against two static provisioning baselines, and score all three
with allocation-efficiency metrics.
"""

from .allocation import (
    AllocationTrace,
    MetricsReport,
    allocate_from_forecast,
    allocation_metrics,
    forecast_errors,
    radar_normalize,
)
from .baselines import StaticForecast, baseline_mean2sigma, baseline_p95, percentile
from .synth import DEFAULT_5G, PROFILES, SynthConfig, generate_traffic
from . import charts, neural
from .timeseries import (
    FEATURES,
    FeatureScaler,
    KpiRecord,
    KpiSeries,
    SplitSpec,
    WindowedDataset,
    chrono_split,
    fit_scaler,
    load_csv,
    make_windows,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationTrace",
    "DEFAULT_5G",
    "FEATURES",
    "FeatureScaler",
    "KpiRecord",
    "KpiSeries",
    "MetricsReport",
    "PROFILES",
    "charts",
    "neural",
    "SplitSpec",
    "StaticForecast",
    "SynthConfig",
    "WindowedDataset",
    "allocate_from_forecast",
    "allocation_metrics",
    "baseline_mean2sigma",
    "baseline_p95",
    "chrono_split",
    "fit_scaler",
    "forecast_errors",
    "generate_traffic",
    "load_csv",
    "make_windows",
    "percentile",
    "radar_normalize",
    "write_csv",
]
