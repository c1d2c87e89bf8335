"""Compare the learned forecaster against both static baselines.

All three policies see the same held-out test period.  The forecaster
allocates what it predicts for each timestep; the baselines allocate one
constant.  Each policy is scored on forecast error (MAE, RMSE) and on
allocation quality (efficiency, wastage, utilization, over-provisioning),
and the normalized scores go onto a radar chart alongside error and
efficiency charts.

Run demos/05_train_forecaster.py first if you want this script to reuse
its checkpoint; otherwise it trains the same small model itself.
"""

import pathlib

import numpy as np

from twincast import (
    DEFAULT_5G,
    FEATURES,
    SplitSpec,
    chrono_split,
    fit_scaler,
    generate_traffic,
    make_windows,
)
from twincast.allocation import (
    AllocationTrace,
    allocate_from_forecast,
    allocation_metrics,
    radar_normalize,
)
from twincast.baselines import baseline_mean2sigma, baseline_p95
from twincast.charts import write_charts
from twincast.neural import ArchitectureSpec, TrainConfig, init_model, load_checkpoint, predict_series, save_checkpoint, train

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
ckpt_path = out_dir / "demo_model.npz"

series = generate_traffic(DEFAULT_5G)
train_split, val_split, test_split = chrono_split(
    series, SplitSpec(train_fraction=0.8, val_fraction_of_train=0.2)
)
scaler = fit_scaler(train_split)
window = 10
target = FEATURES.index("internet")

if ckpt_path.exists():
    model, scaler, extra = load_checkpoint(ckpt_path)
    window = extra["window"]
    target = extra["target_feature_index"]
    print(f"loaded checkpoint {ckpt_path}")
else:
    print("no checkpoint found, training a small model (a few seconds)")
    train_set = make_windows(train_split, scaler, window=window, target_index=target)
    val_set = make_windows(val_split, scaler, window=window, target_index=target)
    model = init_model(len(FEATURES), ArchitectureSpec(hidden_sizes=(32,), dense_hidden=16), seed=0)
    model, _ = train(model, train_set, val_set, TrainConfig(max_epochs=12, early_stop_patience=3, seed=0))
    save_checkpoint(ckpt_path, model, scaler, extra={"window": window, "target_feature_index": target})

test_set = make_windows(test_split, scaler, window=window, target_index=target)
actual = test_split.feature("internet")[window:]

forecasts = {
    "ai_dt": predict_series(model, test_set, scaler),
    "baseline1_mean2sigma": baseline_mean2sigma(train_split.feature("internet"), len(actual)).values(),
    "baseline2_p95": baseline_p95(train_split.feature("internet"), len(actual)).values(),
}

policies = {}
reports = []
for name, forecast in forecasts.items():
    trace = AllocationTrace(name, actual, allocate_from_forecast(forecast))
    report = allocation_metrics(trace)
    policies[name] = report.to_dict()
    reports.append((name, report))

print()
print(f"{'policy':<22s} {'MAE (Mb/s)':>11s} {'RMSE (Mb/s)':>12s} {'mean OP (Mb/s)':>15s} {'med. eff':>9s}")
for name, m in policies.items():
    print(f"{name:<22s} {m['mae'] / 1e6:11.1f} {m['rmse'] / 1e6:12.1f} "
          f"{m['mean_over_provisioning'] / 1e6:15.1f} {m['efficiency_median']:9.3f}")

radar = radar_normalize(reports)
print()
print("radar scores (1.0 is best across policies on each axis):")
for name, axes in radar.items():
    summary = "  ".join(f"{axis}={score:.2f}" for axis, score in axes.items())
    print(f"  {name}: {summary}")

chart_report = {"policies": policies, "radar": radar}
paths = write_charts(chart_report, out_dir)
print()
print("charts written:")
for p in paths:
    print(f"  {p}")

best = min(policies, key=lambda n: policies[n]["mae"])
waste = {n: m["mean_over_provisioning"] for n, m in policies.items()}
print()
print(f"lowest forecast error: {best}")
print(f"capacity wasted per step vs worst baseline: "
      f"{(max(waste.values()) - waste[best]) / 1e6:.1f} Mbit/s saved")
