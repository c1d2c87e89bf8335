"""Multivariate KPI time series: ingestion, scaling, splitting, windowing.

A series carries four network indicators sampled at a fixed interval:
total internet traffic, downstream throughput, concurrent sessions, and VPN
throughput.  Supervised learning tensors are built by sliding a fixed-length
window over a chronologically split, min-max scaled series.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import OrderingError, ParseError, SchemaError, SizeError

FEATURES = ("internet", "downstream", "sessions", "vpn")
CSV_HEADER = ("timestamp",) + FEATURES
DEFAULT_INTERVAL_S = 300


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class KpiRecord:
    """One sampling instant: timestamp in seconds plus the four KPI values."""

    timestamp: int
    internet: float
    downstream: float
    sessions: float
    vpn: float


@dataclass(frozen=True)
class KpiSeries:
    """An ordered, gap-free multivariate KPI series.

    Attributes
    ----------
    timestamps : np.ndarray
        int64 vector, strictly increasing with a constant step of
        ``interval_s`` seconds.
    values : np.ndarray
        float64 array of shape ``[n, 4]`` with columns ordered as
        :data:`FEATURES`; all entries finite and non-negative.
    interval_s : int
        Sampling interval in seconds.
    """

    timestamps: np.ndarray
    values: np.ndarray
    interval_s: int

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.int64)
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[1] != len(FEATURES):
            raise ParseError(f"values must have shape [n, {len(FEATURES)}], got {vals.shape}")
        if ts.shape != (vals.shape[0],):
            raise ParseError("timestamps and values disagree in length")
        if self.interval_s <= 0:
            raise ParseError("interval_s must be a positive integer")
        if len(ts) > 1:
            steps = np.diff(ts)
            if np.any(steps <= 0):
                row = int(np.argmax(steps <= 0)) + 1
                raise OrderingError(f"timestamps not strictly increasing at data row {row + 1}")
            if np.any(steps != self.interval_s):
                row = int(np.argmax(steps != self.interval_s)) + 1
                raise OrderingError(
                    f"irregular sampling interval at data row {row + 1}: "
                    f"expected {self.interval_s} s, got {int(steps[row - 1])} s"
                )
        if not np.all(np.isfinite(vals)):
            raise ParseError("KPI values must all be finite")
        if np.any(vals < 0):
            raise ParseError("KPI values must all be non-negative")
        object.__setattr__(self, "timestamps", _readonly(ts))
        object.__setattr__(self, "values", _readonly(vals))

    def __len__(self) -> int:
        return self.values.shape[0]

    def record(self, i: int) -> KpiRecord:
        return KpiRecord(int(self.timestamps[i]), *(float(v) for v in self.values[i]))

    @property
    def records(self) -> list[KpiRecord]:
        return [self.record(i) for i in range(len(self))]

    def feature(self, name: str) -> np.ndarray:
        """Return one KPI column by name."""
        return self.values[:, FEATURES.index(name)]

    def slice(self, start: int, stop: int) -> "KpiSeries":
        return KpiSeries(
            self.timestamps[start:stop].copy(),
            self.values[start:stop].copy(),
            self.interval_s,
        )

    @classmethod
    def from_records(cls, records: list[KpiRecord], interval_s: int) -> "KpiSeries":
        ts = np.array([r.timestamp for r in records], dtype=np.int64)
        vals = np.array(
            [[r.internet, r.downstream, r.sessions, r.vpn] for r in records],
            dtype=np.float64,
        ).reshape(len(records), 4)
        return cls(ts, vals, interval_s)


@dataclass(frozen=True)
class SplitSpec:
    """Chronological split fractions: train block, then validation taken from
    the tail of the train block, then the final test block."""

    train_fraction: float = 0.8
    val_fraction_of_train: float = 0.2

    def __post_init__(self):
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValueError("train_fraction must lie in (0, 1]")
        if not 0.0 <= self.val_fraction_of_train < 1.0:
            raise ValueError("val_fraction_of_train must lie in [0, 1)")


@dataclass(frozen=True)
class FeatureScaler:
    """Per-feature min-max scaler fitted on the training split only.

    ``transform`` maps each feature to [0, 1]; a degenerate feature
    (max == min) maps to 0.0 and inverse-transforms back to its constant.
    """

    feature_min: np.ndarray
    feature_max: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.feature_min, dtype=np.float64)
        hi = np.asarray(self.feature_max, dtype=np.float64)
        if lo.shape != (len(FEATURES),) or hi.shape != (len(FEATURES),):
            raise ParseError(f"scaler bounds must have shape [{len(FEATURES)}]")
        if np.any(hi < lo):
            raise ParseError("feature_max must be >= feature_min for every feature")
        object.__setattr__(self, "feature_min", _readonly(lo))
        object.__setattr__(self, "feature_max", _readonly(hi))

    @property
    def span(self) -> np.ndarray:
        return self.feature_max - self.feature_min

    @classmethod
    def identity(cls) -> "FeatureScaler":
        """A scaler whose transform is the identity map."""
        return cls(np.zeros(len(FEATURES)), np.ones(len(FEATURES)))

    def transform(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=np.float64)
        span = self.span
        safe = np.where(span > 0, span, 1.0)
        scaled = (values - self.feature_min) / safe
        return np.where(span > 0, scaled, 0.0)

    def inverse_transform(self, scaled: np.ndarray) -> np.ndarray:
        scaled = np.asarray(scaled, dtype=np.float64)
        return scaled * self.span + self.feature_min

    def transform_feature(self, x: np.ndarray, index: int) -> np.ndarray:
        span = self.span[index]
        if span <= 0:
            return np.zeros_like(np.asarray(x, dtype=np.float64))
        return (np.asarray(x, dtype=np.float64) - self.feature_min[index]) / span

    def inverse_feature(self, x: np.ndarray, index: int) -> np.ndarray:
        return np.asarray(x, dtype=np.float64) * self.span[index] + self.feature_min[index]


@dataclass(frozen=True)
class WindowedDataset:
    """Sliding-window supervised dataset.

    ``inputs[i, j, k]`` is the scaled series value at absolute step ``i + j``
    for feature ``k``; ``targets[i]`` is the scaled target-feature value at
    step ``i + window``.  One window per valid start position.
    """

    inputs: np.ndarray
    targets: np.ndarray
    target_feature_index: int

    def __post_init__(self):
        x = np.asarray(self.inputs, dtype=np.float64)
        y = np.asarray(self.targets, dtype=np.float64)
        if x.ndim != 3:
            raise ParseError("inputs must be a rank-3 array [n, t, features]")
        if y.shape != (x.shape[0],):
            raise ParseError("targets must be a vector of length n")
        if not 0 <= self.target_feature_index < x.shape[2]:
            raise ParseError("target_feature_index out of range")
        object.__setattr__(self, "inputs", _readonly(x))
        object.__setattr__(self, "targets", _readonly(y))

    def __len__(self) -> int:
        return self.inputs.shape[0]

    @property
    def window(self) -> int:
        return self.inputs.shape[1]


def load_csv(path, schema: tuple[str, ...] = CSV_HEADER) -> KpiSeries:
    """Read a KPI series from CSV, validating schema and ordering.

    The header must match ``timestamp,internet,downstream,sessions,vpn``
    exactly.  Timestamps are normalized to start at zero and must advance by
    one constant interval; gaps are a hard error.  Data rows are numbered
    from 1 in error messages.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("file is empty: expected header " + ",".join(schema)) from None
        header = [h.strip() for h in header]
        missing = [c for c in schema if c not in header]
        extra = [c for c in header if c not in schema]
        if missing or extra or list(header) != list(schema):
            parts = []
            if missing:
                parts.append("missing column(s): " + ", ".join(missing))
            if extra:
                parts.append("unexpected column(s): " + ", ".join(extra))
            if not parts:
                parts.append("columns out of order")
            raise SchemaError("; ".join(parts) + "; expected header " + ",".join(schema))

        raw_ts: list[float] = []
        raw_vals: list[list[float]] = []
        for row_num, row in enumerate(reader, start=1):
            if len(row) != len(schema):
                raise ParseError(f"data row {row_num}: expected {len(schema)} cells, got {len(row)}")
            try:
                cells = [float(c) for c in row]
            except ValueError as exc:
                raise ParseError(f"data row {row_num}: non-numeric cell ({exc})") from None
            if cells[0] < 0 or cells[0] != int(cells[0]):
                raise ParseError(f"data row {row_num}: timestamp must be a non-negative integer")
            raw_ts.append(cells[0])
            raw_vals.append(cells[1:])

    n = len(raw_ts)
    ts = np.array(raw_ts, dtype=np.int64)
    vals = np.array(raw_vals, dtype=np.float64).reshape(n, len(FEATURES))

    if n > 1:
        steps = np.diff(ts)
        if np.any(steps <= 0):
            row = int(np.argmax(steps <= 0)) + 2
            raise OrderingError(f"timestamp not strictly increasing at data row {row}")
        interval = int(steps[0])
        if np.any(steps != interval):
            row = int(np.argmax(steps != interval)) + 2
            raise OrderingError(
                f"irregular sampling interval at data row {row}: "
                f"expected {interval} s, got {int(steps[row - 2])} s"
            )
    else:
        interval = DEFAULT_INTERVAL_S

    bad = ~np.isfinite(vals) | (vals < 0)
    if np.any(bad):
        row = int(np.argmax(bad.any(axis=1))) + 1
        raise ParseError(f"data row {row}: KPI values must be finite and non-negative")

    if n:
        ts = ts - ts[0]
    return KpiSeries(ts, vals, interval)


def write_csv(series: KpiSeries, path) -> None:
    """Write a series in the standard CSV schema, round-trip exact."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for i in range(len(series)):
            cells = [str(int(series.timestamps[i]))]
            cells += [repr(float(v)) for v in series.values[i]]
            fh.write(",".join(cells) + "\n")


def chrono_split(
    series: KpiSeries,
    spec: SplitSpec = SplitSpec(),
    min_split_length: int | None = None,
) -> tuple[KpiSeries, KpiSeries, KpiSeries]:
    """Split chronologically into (train, val, test) without shuffling.

    The first ``train_fraction`` of rows forms the training block; the last
    ``val_fraction_of_train`` of that block becomes validation; the remaining
    tail of the series is test.  Concatenating the three reproduces the
    input.  When ``min_split_length`` is given, every non-empty split must
    reach it (pass ``window + 1`` so each split stays windowable).
    """
    n = len(series)
    n_train_total = int(n * spec.train_fraction)
    n_val = int(n_train_total * spec.val_fraction_of_train)
    n_train = n_train_total - n_val
    n_test = n - n_train_total
    if min_split_length is not None:
        for name, size in (("train", n_train), ("val", n_val), ("test", n_test)):
            if 0 < size < min_split_length or (name == "train" and size == 0):
                raise SizeError(
                    f"{name} split has {size} rows; each non-empty split needs "
                    f"at least {min_split_length} rows"
                )
    train = series.slice(0, n_train)
    val = series.slice(n_train, n_train_total)
    test = series.slice(n_train_total, n)
    return train, val, test


def fit_scaler(train: KpiSeries) -> FeatureScaler:
    """Fit per-feature min/max on the training split only."""
    if len(train) == 0:
        raise SizeError("cannot fit scaler: training series is empty")
    return FeatureScaler(train.values.min(axis=0), train.values.max(axis=0))


def make_windows(
    series: KpiSeries,
    scaler: FeatureScaler,
    window: int,
    target_index: int,
) -> WindowedDataset:
    """Scale a series and slice it into ``len(series) - window`` supervised
    windows, each predicting the target feature one step after the window."""
    if window < 1:
        raise ValueError("window must be a positive integer")
    if not 0 <= target_index < len(FEATURES):
        raise ValueError(f"target_index must lie in 0..{len(FEATURES) - 1}")
    n = len(series) - window
    if n < 1:
        raise SizeError(
            f"series of length {len(series)} is too short to window: "
            f"need at least window + 1 = {window + 1} rows"
        )
    scaled = scaler.transform(series.values)
    starts = np.arange(n)[:, None] + np.arange(window)[None, :]
    inputs = scaled[starts]
    targets = scaled[window:, target_index].copy()
    return WindowedDataset(inputs, targets, target_index)
