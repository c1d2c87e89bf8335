"""Train a small bandwidth forecaster and watch the loss curves.

A scaled-down network (one bidirectional layer instead of three) trains in
well under a minute and already learns the diurnal structure.  Training
runs chronologically with Adam, reduces the learning rate when validation
loss plateaus, stops early when it no longer improves, and restores the
best weights seen.  The fitted model and scaler go into one checkpoint
file that a later comparison run can reload.
"""

import pathlib
import time

import numpy as np

from twincast import DEFAULT_5G, FEATURES, SplitSpec, chrono_split, fit_scaler, generate_traffic, make_windows
from twincast.neural import ArchitectureSpec, TrainConfig, init_model, predict_series, save_checkpoint, train

series = generate_traffic(DEFAULT_5G)
train_split, val_split, test_split = chrono_split(
    series, SplitSpec(train_fraction=0.8, val_fraction_of_train=0.2)
)

scaler = fit_scaler(train_split)
target = FEATURES.index("internet")
window = 10
train_set = make_windows(train_split, scaler, window=window, target_index=target)
val_set = make_windows(val_split, scaler, window=window, target_index=target)

arch = ArchitectureSpec(hidden_sizes=(32,), dense_hidden=16, dropout_p=0.2)
model = init_model(len(FEATURES), arch, seed=0)
config = TrainConfig(max_epochs=12, early_stop_patience=3, seed=0)

start = time.perf_counter()
model, report = train(model, train_set, val_set, config)
elapsed = time.perf_counter() - start

print(f"trained for {len(report.train_losses)} epochs in {elapsed:.1f} s")
print()
# epochs are numbered from 1, matching report.best_epoch
print("epoch   train mse   val mse")
for i, (tr, va) in enumerate(zip(report.train_losses, report.val_losses), start=1):
    marker = "  <- best, weights restored" if i == report.best_epoch else ""
    print(f"{i:5d}   {tr:9.4f}   {va:7.4f}{marker}")
print()
print(f"stopped early:       {report.stopped_early}")
print(f"final learning rate: {report.final_learning_rate:.2e}")

# forecasts come back in raw units after inverting the target scaling
test_set = make_windows(test_split, scaler, window=window, target_index=target)
predicted = predict_series(model, test_set, scaler)
actual = test_split.feature("internet")[window:]
mae = float(np.mean(np.abs(predicted - actual)))
print(f"held-out MAE:        {mae / 1e6:.1f} Mbit/s")

out_dir = pathlib.Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
ckpt = out_dir / "demo_model.npz"
save_checkpoint(ckpt, model, scaler, extra={"window": window, "target_feature_index": target})
print(f"checkpoint saved to  {ckpt}")
