"""Generate a week of synthetic 5G cell traffic and look at its shape.

The generator layers a diurnal sine, a weekly sine, AR(1) noise, and
Poisson-arriving bursts with exponentially decaying tails on top of a base
level, then derives downstream volume, session count, and VPN share from
the headline internet bandwidth.  Everything is driven by one seed.
"""

import numpy as np

from twincast import DEFAULT_5G, generate_traffic

series = generate_traffic(DEFAULT_5G)

print(f"rows:      {len(series)}")
print(f"interval:  {series.interval_s} s  ({len(series) * series.interval_s / 86400:.1f} days)")
print(f"features:  internet, downstream, sessions, vpn")
print()

internet = series.feature("internet")
print("internet bandwidth (bit/s):")
print(f"  mean {internet.mean():.3e}   min {internet.min():.3e}   max {internet.max():.3e}")

# the configured base level sits close to the realized mean because the
# periodic terms and AR noise are zero-mean; bursts push the mean up a bit
print(f"  configured base level: {DEFAULT_5G.base_level:.3e}")
print()

# a coarse daily profile: average per hour-of-day across the whole series
samples_per_hour = 3600 // series.interval_s
hours = (np.arange(len(series)) // samples_per_hour) % 24
print("hour-of-day averages (Mbit/s):")
for hour in range(0, 24, 3):
    avg = internet[hours == hour].mean() / 1e6
    bar = "#" * int(avg / 20)
    print(f"  {hour:02d}:00  {avg:7.1f}  {bar}")

print()
print("same seed, same series:", np.array_equal(generate_traffic(DEFAULT_5G).values, series.values))
