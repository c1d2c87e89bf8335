"""Seeded synthetic multivariate KPI traffic generation.

The operator data this toolkit was designed around is proprietary, so
experiments run on a reproducible stand-in: a base level plus diurnal and
weekly sinusoids, AR(1) noise, and Poisson-arriving bursts with exponential
decay.  Downstream throughput, session count, and VPN throughput are derived
from the internet series with independent noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .timeseries import KpiSeries

SECONDS_PER_DAY = 86400
BURST_DECAY_S = 3600.0
DERIVED_NOISE_SCALE = 0.5


@dataclass(frozen=True)
class SynthConfig:
    """Generator parameters; every field is pinned so runs are reproducible.

    ``burst_rate`` is expressed in bursts per day, ``base_level`` and the
    amplitudes in bits per second.  All generated values are clipped at zero.
    """

    seed: int
    length: int
    interval_s: int = 300
    base_level: float = 500e6
    diurnal_amplitude: float = 200e6
    weekly_amplitude: float = 50e6
    noise_sigma: float = 20e6
    ar_coefficient: float = 0.8
    burst_rate: float = 4.0
    burst_magnitude: float = 80e6
    downstream_ratio: float = 0.7
    sessions_per_bps: float = 2e-5
    vpn_fraction: float = 0.15

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if self.interval_s < 1:
            raise ValueError("interval_s must be >= 1")
        if self.base_level <= 0:
            raise ValueError("base_level must be positive")
        for name in ("diurnal_amplitude", "weekly_amplitude", "noise_sigma",
                     "burst_rate", "burst_magnitude"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 0.0 <= self.ar_coefficient < 1.0:
            raise ValueError("ar_coefficient must lie in [0, 1)")
        if not 0.0 < self.downstream_ratio <= 1.0:
            raise ValueError("downstream_ratio must lie in (0, 1]")
        if self.sessions_per_bps <= 0:
            raise ValueError("sessions_per_bps must be positive")
        if not 0.0 <= self.vpn_fraction < 1.0:
            raise ValueError("vpn_fraction must lie in [0, 1)")


DEFAULT_5G = SynthConfig(seed=42, length=2000)

PROFILES = {"default-5g": DEFAULT_5G}


def _ar1(innovations: np.ndarray, coefficient: float) -> np.ndarray:
    # x_t = coefficient * x_{t-1} + eps_t, x_0 = eps_0
    return lfilter([1.0], [1.0, -coefficient], innovations)


def generate_traffic(config: SynthConfig) -> KpiSeries:
    """Generate a KPI series deterministically from ``config``.

    Random draws happen in a fixed order (innovations, burst arrivals, burst
    magnitudes, then one noise vector per derived feature), so identical
    configs produce byte-identical series.
    """
    rng = np.random.default_rng(config.seed)
    n = config.length
    t = np.arange(n, dtype=np.float64)
    samples_per_day = SECONDS_PER_DAY / config.interval_s

    diurnal = config.diurnal_amplitude * np.sin(2.0 * np.pi * t / samples_per_day)
    weekly = config.weekly_amplitude * np.sin(2.0 * np.pi * t / (7.0 * samples_per_day))

    innovations = rng.normal(0.0, config.noise_sigma, size=n) if config.noise_sigma > 0 \
        else np.zeros(n)
    noise = _ar1(innovations, config.ar_coefficient)

    arrivals = rng.random(n) < (config.burst_rate / samples_per_day)
    magnitudes = rng.exponential(config.burst_magnitude, size=n) if config.burst_magnitude > 0 \
        else np.zeros(n)
    impulses = np.where(arrivals, magnitudes, 0.0)
    decay = np.exp(-config.interval_s / BURST_DECAY_S)
    bursts = lfilter([1.0], [1.0, -decay], impulses)

    internet = np.clip(config.base_level + diurnal + weekly + noise + bursts, 0.0, None)

    def derived(scale: float) -> np.ndarray:
        sigma = DERIVED_NOISE_SCALE * config.noise_sigma * scale
        extra = rng.normal(0.0, sigma, size=n) if sigma > 0 else np.zeros(n)
        return np.clip(scale * internet + extra, 0.0, None)

    downstream = derived(config.downstream_ratio)
    sessions = derived(config.sessions_per_bps)
    vpn = derived(config.vpn_fraction)

    values = np.stack([internet, downstream, sessions, vpn], axis=1)
    timestamps = np.arange(n, dtype=np.int64) * config.interval_s
    return KpiSeries(timestamps, values, config.interval_s)
