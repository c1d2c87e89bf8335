"""Fit the two static provisioning baselines and inspect their behavior.

Both baselines reduce the training history of the target KPI to a single
constant that is then allocated at every future timestep: mean plus two
population standard deviations, or the 95th percentile.  They are cheap
and safe but cannot follow the diurnal swing, so they overprovision at
night and still miss some daytime peaks.
"""

import numpy as np

from twincast import DEFAULT_5G, SplitSpec, chrono_split, generate_traffic
from twincast.baselines import baseline_mean2sigma, baseline_p95

series = generate_traffic(DEFAULT_5G)
train, val, test = chrono_split(series, SplitSpec(train_fraction=0.8, val_fraction_of_train=0.2))

history = train.feature("internet")
future = test.feature("internet")

b1 = baseline_mean2sigma(history, horizon=len(future))
b2 = baseline_p95(history, horizon=len(future))

print(f"training history: {len(history)} samples, "
      f"mean {history.mean() / 1e6:.1f} Mbit/s, max {history.max() / 1e6:.1f} Mbit/s")
print()
print(f"mean + 2 sigma level: {b1.constant / 1e6:8.1f} Mbit/s")
print(f"95th percentile:      {b2.constant / 1e6:8.1f} Mbit/s")
print()

for fc in (b1, b2):
    allocated = fc.values()
    covered = float(np.mean(allocated >= future))
    slack = float(np.mean(allocated - future)) / 1e6
    print(f"{fc.method}:")
    print(f"  covers {covered:6.1%} of held-out timesteps")
    print(f"  average slack {slack:+.1f} Mbit/s (positive means wasted capacity)")

print()
print("in-sample coverage is what each rule actually promises:")
for fc in (b1, b2):
    in_sample = float(np.mean(fc.constant >= history))
    print(f"  {fc.method}: {in_sample:.1%}")
