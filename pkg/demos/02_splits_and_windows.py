"""Turn a KPI series into supervised training windows.

The pipeline is strictly chronological: the oldest 64% of rows train the
model, the next 16% validate it, and the newest 20% are held out for the
final comparison.  A min-max scaler is fitted on the training split only,
and sliding windows of ten timesteps each predict the scaled internet
bandwidth one step ahead.
"""

from twincast import (
    DEFAULT_5G,
    FEATURES,
    SplitSpec,
    chrono_split,
    fit_scaler,
    generate_traffic,
    make_windows,
)

series = generate_traffic(DEFAULT_5G)
train, val, test = chrono_split(series, SplitSpec(train_fraction=0.8, val_fraction_of_train=0.2))

print(f"series:  {len(series)} rows")
print(f"splits:  train {len(train)}, val {len(val)}, test {len(test)}")
print()

scaler = fit_scaler(train)
for name, lo, hi in zip(FEATURES, scaler.feature_min, scaler.feature_max):
    print(f"  {name:<10s}  min {lo:.4e}   max {hi:.4e}")
print()

window = 10
target = FEATURES.index("internet")
train_set = make_windows(train, scaler, window=window, target_index=target)
val_set = make_windows(val, scaler, window=window, target_index=target)

print(f"train windows: inputs {train_set.inputs.shape}, targets {train_set.targets.shape}")
print(f"val windows:   inputs {val_set.inputs.shape}, targets {val_set.targets.shape}")
print()

# the last input row of window i is the observation one step before target i
print("window 0, last input row (scaled):", train_set.inputs[0, -1])
print("window 0, target (scaled):        ", train_set.targets[0])
print("window 1, last input row (scaled):", train_set.inputs[1, -1])
print()
print("scaled values live in [0, 1] on the train split:",
      float(train_set.inputs.min()), "to", float(train_set.inputs.max()))
