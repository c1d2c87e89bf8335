"""Command-line orchestration: synthesize data, train the forecaster, and
compare it against the static baselines.

Subcommands:
    synth      write a synthetic KPI CSV
    train      split/scale/window a series, fit the model, save a checkpoint
    compare    score the model and both baselines on the test split and
               emit a JSON report plus four SVG charts
    gradcheck  verify analytic gradients against finite differences

Every experiment knob can be set in a flat ``key = value`` config file
(``--config``); any flag given on the command line overrides its config
key.  The ``TWINCAST_OUT_DIR`` environment variable sets the default output
directory.  All randomness flows from one ``seed``; rerunning a command
with the same resolved config reproduces its outputs bit-for-bit (wall
-clock ``timings`` fields excepted).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .allocation import AllocationTrace, allocate_from_forecast, allocation_metrics, radar_normalize
from .baselines import baseline_mean2sigma, baseline_p95
from .charts import write_charts
from .errors import CompatibilityError, ParseError, TwincastError
from .neural import (
    TrainConfig,
    grad_check,
    init_model,
    load_checkpoint,
    model_size_report,
    predict_series,
    save_checkpoint,
    train,
)
from .synth import PROFILES, SynthConfig, generate_traffic
from .timeseries import (
    FEATURES,
    SplitSpec,
    chrono_split,
    fit_scaler,
    load_csv,
    make_windows,
    write_csv,
)

REPORT_SCHEMA_VERSION = 1
OUT_DIR_ENV = "TWINCAST_OUT_DIR"
DEFAULT_OUT_DIR = "runs"

POLICY_AI = "ai_dt"
POLICY_B1 = "baseline1_mean2sigma"
POLICY_B2 = "baseline2_p95"

_SYNTH_KEYS = (
    "length",
    "interval_s",
    "base_level",
    "diurnal_amplitude",
    "weekly_amplitude",
    "noise_sigma",
    "ar_coefficient",
    "burst_rate",
    "burst_magnitude",
    "downstream_ratio",
    "sessions_per_bps",
    "vpn_fraction",
)
_TRAIN_KEYS = (
    "max_epochs",
    "early_stop_patience",
    "batch_size",
    "learning_rate",
    "lr_plateau_factor",
    "lr_plateau_patience",
    "lr_min",
)

# every config-file key with its value parser; flags override these
CONFIG_KEYS = {
    "input": str,
    "profile": str,
    "out_dir": str,
    "seed": int,
    "window": int,
    "target_feature": str,
    "train_fraction": float,
    "val_fraction": float,
    "floor": float,
    "multiplier": float,
    "length": int,
    "interval_s": int,
    "base_level": float,
    "diurnal_amplitude": float,
    "weekly_amplitude": float,
    "noise_sigma": float,
    "ar_coefficient": float,
    "burst_rate": float,
    "burst_magnitude": float,
    "downstream_ratio": float,
    "sessions_per_bps": float,
    "vpn_fraction": float,
    "max_epochs": int,
    "early_stop_patience": int,
    "batch_size": int,
    "learning_rate": float,
    "lr_plateau_factor": float,
    "lr_plateau_patience": int,
    "lr_min": float,
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved experiment configuration, echoed into every report."""

    input: str | None
    profile: str
    synth: SynthConfig
    split: SplitSpec
    train: TrainConfig
    window: int
    target_feature: str
    floor: float
    multiplier: float
    out_dir: Path
    seed: int

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.target_feature not in FEATURES:
            raise ValueError(
                f"target_feature must be one of {', '.join(FEATURES)}"
            )

    @property
    def target_index(self) -> int:
        return FEATURES.index(self.target_feature)

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "profile": self.profile,
            "synth": dataclasses.asdict(self.synth),
            "train_fraction": self.split.train_fraction,
            "val_fraction": self.split.val_fraction_of_train,
            "train": self.train.to_dict(),
            "window": self.window,
            "target_feature": self.target_feature,
            "floor": self.floor,
            "multiplier": self.multiplier,
            "out_dir": str(self.out_dir),
            "seed": self.seed,
        }


def parse_config_file(path) -> dict:
    """Parse a flat ``key = value`` file: one pair per line, ``#`` comments."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"config line {lineno}: expected 'key = value'")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in CONFIG_KEYS:
            raise ParseError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = CONFIG_KEYS[key](raw_value)
        except ValueError as exc:
            raise ParseError(f"config line {lineno}: bad value for {key!r}: {exc}") from exc
    return values


def resolve_run_config(args: argparse.Namespace) -> RunConfig:
    """Layer built-in defaults < config file < command-line flags."""
    file_values = parse_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(key, default):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        return file_values.get(key, default)

    profile_name = pick("profile", "default-5g")
    if profile_name not in PROFILES:
        raise ParseError(
            f"unknown profile {profile_name!r}; available: {', '.join(sorted(PROFILES))}"
        )
    base = PROFILES[profile_name]
    seed = pick("seed", base.seed)
    synth = SynthConfig(
        seed=seed, **{key: pick(key, getattr(base, key)) for key in _SYNTH_KEYS}
    )
    train_defaults = TrainConfig()
    train_config = TrainConfig(
        seed=seed,
        **{key: pick(key, getattr(train_defaults, key)) for key in _TRAIN_KEYS},
    )
    split = SplitSpec(
        train_fraction=pick("train_fraction", 0.8),
        val_fraction_of_train=pick("val_fraction", 0.2),
    )
    out_dir = Path(pick("out_dir", os.environ.get(OUT_DIR_ENV, DEFAULT_OUT_DIR)))
    return RunConfig(
        input=pick("input", None),
        profile=profile_name,
        synth=synth,
        split=split,
        train=train_config,
        window=pick("window", 10),
        target_feature=pick("target_feature", "internet"),
        floor=pick("floor", 0.0),
        multiplier=pick("multiplier", 1.0),
        out_dir=out_dir,
        seed=seed,
    )


def _load_series(config: RunConfig):
    if config.input:
        return load_csv(config.input)
    return generate_traffic(config.synth)


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def cmd_synth(config: RunConfig, out_path=None) -> Path:
    """Generate a synthetic series and write it as CSV."""
    series = generate_traffic(config.synth)
    path = Path(out_path) if out_path else config.out_dir / "traffic.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(series, path)
    print(f"wrote {len(series)} rows to {path}")
    return path


def cmd_train(config: RunConfig, checkpoint_path=None, report_path=None) -> tuple[Path, Path]:
    """Split, scale, window, train, and persist checkpoint plus report."""
    started = time.perf_counter()
    series = _load_series(config)
    train_series, val_series, test_series = chrono_split(series, config.split)
    scaler = fit_scaler(train_series)
    train_windows = make_windows(train_series, scaler, config.window, config.target_index)
    val_windows = None
    if len(val_series) > config.window:
        val_windows = make_windows(val_series, scaler, config.window, config.target_index)

    model = init_model(len(FEATURES), seed=config.seed)
    model, report = train(model, train_windows, val_windows, config.train)
    count, size_mb = model_size_report(model)

    extra = {
        "window": config.window,
        "target_feature": config.target_feature,
        "target_index": config.target_index,
        "train_fraction": config.split.train_fraction,
        "val_fraction": config.split.val_fraction_of_train,
        "series_length": len(series),
        "series_interval_s": series.interval_s,
        "data_source": config.input or f"profile:{config.profile}",
        "train_config": config.train.to_dict(),
        "train_report": report.to_dict(),
    }
    ckpt = Path(checkpoint_path) if checkpoint_path else config.out_dir / "model.npz"
    ckpt.parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(ckpt, model, scaler, extra=extra)

    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": config.to_dict(),
        "train_report": report.to_dict(),
        "model": {"parameter_count": count, "size_mb": size_mb},
        "splits": {
            "train_rows": len(train_series),
            "val_rows": len(val_series),
            "test_rows": len(test_series),
        },
        "timings": {"train_seconds": time.perf_counter() - started},
    }
    report_file = Path(report_path) if report_path else config.out_dir / "train_report.json"
    _write_json(report_file, payload)

    epochs = len(report.train_losses)
    best_val = report.val_losses[report.best_epoch - 1] if report.val_losses else None
    print(f"trained {epochs} epochs (best epoch {report.best_epoch})")
    if best_val is not None:
        print(f"best validation MSE {best_val:.6g}")
    print(f"checkpoint: {ckpt}")
    print(f"report: {report_file}")
    return ckpt, report_file


def cmd_compare(config: RunConfig, checkpoint_path=None, report_path=None) -> tuple[Path, list[Path]]:
    """Evaluate the checkpointed model and both baselines on the test split."""
    started = time.perf_counter()
    ckpt = Path(checkpoint_path) if checkpoint_path else config.out_dir / "model.npz"
    model, scaler, meta = load_checkpoint(ckpt)

    series = _load_series(config)
    if len(series) != meta["series_length"] or series.interval_s != meta["series_interval_s"]:
        raise CompatibilityError(
            f"checkpoint was trained on a series of {meta['series_length']} rows at "
            f"{meta['series_interval_s']} s, got {len(series)} rows at {series.interval_s} s"
        )
    # alignment settings come from the checkpoint, not the current flags
    window = meta["window"]
    target_index = meta["target_index"]
    split = SplitSpec(meta["train_fraction"], meta["val_fraction"])
    train_series, _, test_series = chrono_split(series, split)
    test_windows = make_windows(test_series, scaler, window, target_index)

    predictions = predict_series(model, test_windows, scaler)
    actual = test_series.values[window:, target_index]
    n_test = len(actual)

    train_targets = train_series.values[:, target_index]
    policies = {
        POLICY_AI: predictions,
        POLICY_B1: baseline_mean2sigma(train_targets, horizon=n_test).values(),
        POLICY_B2: baseline_p95(train_targets, horizon=n_test).values(),
    }
    reports = []
    for name, forecast in policies.items():
        allocated = allocate_from_forecast(forecast, floor=config.floor, multiplier=config.multiplier)
        reports.append((name, allocation_metrics(AllocationTrace(name, actual, allocated))))

    count, size_mb = model_size_report(model)
    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": config.to_dict(),
        "checkpoint_meta": {k: v for k, v in meta.items() if k != "train_report"},
        "train_report": meta["train_report"],
        "model": {"parameter_count": count, "size_mb": size_mb},
        "n_test_windows": n_test,
        "policies": {name: report.to_dict() for name, report in reports},
        "radar": radar_normalize(reports),
        "timings": {"compare_seconds": time.perf_counter() - started},
    }
    report_file = Path(report_path) if report_path else config.out_dir / "comparison_report.json"
    _write_json(report_file, payload)
    charts = write_charts(payload, config.out_dir)

    print(f"{'policy':28s} {'MAE(Mbps)':>10s} {'RMSE(Mbps)':>11s} {'meanOP(Mbps)':>13s} {'med.eff':>8s}")
    for name, rep in reports:
        print(
            f"{name:28s} {rep.mae / 1e6:10.2f} {rep.rmse / 1e6:11.2f} "
            f"{rep.mean_over_provisioning / 1e6:13.2f} {rep.efficiency_median:8.3f}"
        )
    print(f"report: {report_file}")
    return report_file, charts


def cmd_gradcheck(trials: int, tolerance: float, seed: int) -> bool:
    """Run the gradient checker and print its per-block summary."""
    report = grad_check(trials=trials, tolerance=tolerance, seed=seed)
    for line in report.summary_lines():
        print(line)
    return report.passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twincast",
        description="Digital-twin traffic forecasting and bandwidth provisioning",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out-dir", dest="out_dir", help="output directory")
    common.add_argument("--seed", type=int, help="master random seed")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", help="input KPI CSV (otherwise a synth profile is used)")
    data.add_argument("--profile", help="synthetic traffic profile name")
    data.add_argument("--length", type=int, help="synthetic series length")
    data.add_argument("--interval-s", dest="interval_s", type=int, help="sampling interval")
    for key in _SYNTH_KEYS[2:]:
        data.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)

    p_synth = sub.add_parser("synth", parents=[common, data], help="write a synthetic KPI CSV")
    p_synth.add_argument("--out", help="output CSV path (default <out-dir>/traffic.csv)")

    p_train = sub.add_parser("train", parents=[common, data], help="train the forecaster")
    p_train.add_argument("--window", type=int, help="input window length")
    p_train.add_argument("--target-feature", dest="target_feature", help="feature to forecast")
    p_train.add_argument("--train-fraction", dest="train_fraction", type=float)
    p_train.add_argument("--val-fraction", dest="val_fraction", type=float)
    for key in _TRAIN_KEYS:
        arg_type = float if key in ("learning_rate", "lr_plateau_factor", "lr_min") else int
        p_train.add_argument(f"--{key.replace('_', '-')}", dest=key, type=arg_type)
    p_train.add_argument("--checkpoint", help="checkpoint path (default <out-dir>/model.npz)")
    p_train.add_argument("--report", help="report path (default <out-dir>/train_report.json)")

    p_compare = sub.add_parser(
        "compare", parents=[common, data], help="score model and baselines on the test split"
    )
    p_compare.add_argument("--checkpoint", help="checkpoint path (default <out-dir>/model.npz)")
    p_compare.add_argument("--floor", type=float, help="minimum allocation")
    p_compare.add_argument("--multiplier", type=float, help="allocation headroom multiplier")
    p_compare.add_argument("--report", help="report path (default <out-dir>/comparison_report.json)")

    p_grad = sub.add_parser("gradcheck", parents=[common], help="verify analytic gradients")
    p_grad.add_argument("--trials", type=int, default=10)
    p_grad.add_argument("--tolerance", type=float, default=1e-4)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gradcheck":
            passed = cmd_gradcheck(
                trials=args.trials,
                tolerance=args.tolerance,
                seed=args.seed if args.seed is not None else 1234,
            )
            return 0 if passed else 1
        config = resolve_run_config(args)
        if args.command == "synth":
            cmd_synth(config, out_path=args.out)
        elif args.command == "train":
            cmd_train(config, checkpoint_path=args.checkpoint, report_path=args.report)
        elif args.command == "compare":
            cmd_compare(config, checkpoint_path=args.checkpoint, report_path=args.report)
    except (TwincastError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0
