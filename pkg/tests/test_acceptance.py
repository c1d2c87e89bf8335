"""Acceptance gate: eight end-to-end criteria, one printed verdict each.

Each test prints a single PASS/FAIL line (routed past pytest's capture so
the verdicts always appear) and then asserts.  Criteria 4 and 6 share one
full-scale pipeline run over the pinned default-5g profile: train and
compare are invoked twice with identical argument vectors to check both
the comparative outcome and byte-level reproducibility of the artifacts.
"""

import dataclasses
import json
import math
import time
from types import SimpleNamespace

import numpy as np
import pytest

from twincast import (
    DEFAULT_5G,
    SplitSpec,
    chrono_split,
    generate_traffic,
)
from twincast.allocation import (
    AllocationTrace,
    allocation_metrics,
    forecast_errors,
    per_timestep_metrics,
)
from twincast.baselines import baseline_mean2sigma, baseline_p95
from twincast.cli import main as cli_main
from twincast.neural import (
    ArchitectureSpec,
    TrainConfig,
    grad_check,
    init_model,
    model_size_report,
    train,
)
from twincast.neural import training as training_module
from twincast.timeseries import WindowedDataset

REPORT_ARTIFACTS = ("train_report.json", "comparison_report.json")
CHART_ARTIFACTS = ("errors.svg", "overprovisioning.svg", "radar.svg", "efficiency_box.svg")


@pytest.fixture
def verdict(request):
    """Emit one PASS/FAIL line per criterion, bypassing output capture."""
    capture = request.config.pluginmanager.getplugin("capturemanager")

    def emit(number: int, label: str, ok: bool, detail: str) -> None:
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number} ({label}): {status} - {detail}"
        if capture is not None:
            with capture.global_and_fixture_disabled():
                print(line, flush=True)
        else:
            print(line, flush=True)
        assert ok, line

    return emit


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Train and compare twice with byte-identical invocations."""
    out = tmp_path_factory.mktemp("acceptance")
    argv_train = ["train", "--profile", "default-5g", "--out-dir", str(out)]
    argv_compare = ["compare", "--profile", "default-5g", "--out-dir", str(out)]

    started = time.perf_counter()
    assert cli_main(argv_train) == 0
    assert cli_main(argv_compare) == 0
    elapsed = time.perf_counter() - started

    names = REPORT_ARTIFACTS + CHART_ARTIFACTS
    first = {name: (out / name).read_bytes() for name in names}
    assert cli_main(argv_train) == 0
    assert cli_main(argv_compare) == 0
    second = {name: (out / name).read_bytes() for name in names}

    report = json.loads(first["comparison_report.json"])
    return SimpleNamespace(elapsed=elapsed, first=first, second=second, report=report)


def test_criterion_1_gradient_check(verdict):
    started = time.perf_counter()
    report = grad_check(trials=10)
    elapsed = time.perf_counter() - started
    worst = max(report.max_rel_error.values())
    verdict(
        1,
        "analytic gradients match finite differences",
        report.passed and elapsed < 30.0,
        f"10 trials, worst rel err {worst:.2e} vs tolerance {report.tolerance:.0e}, {elapsed:.1f} s",
    )


def test_criterion_2_baseline_oracles(verdict):
    def oracle_mean2sigma(values):
        n = len(values)
        mean = sum(values) / n
        var = sum((v - mean) ** 2 for v in values) / n
        return mean + 2.0 * math.sqrt(var)

    def oracle_p95(values):
        s = sorted(values)
        rank = 0.95 * (len(s) - 1)
        lo = math.floor(rank)
        hi = math.ceil(rank)
        return s[lo] + (rank - lo) * (s[hi] - s[lo])

    rng = np.random.default_rng(20260814)
    started = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        values = rng.uniform(0.0, 1e6, size=int(rng.integers(1, 201)))
        got1 = baseline_mean2sigma(values, horizon=3)
        got2 = baseline_p95(values, horizon=3)
        want1 = oracle_mean2sigma(values.tolist())
        want2 = oracle_p95(values.tolist())
        worst = max(
            worst,
            abs(got1.constant - want1) / abs(want1),
            abs(got2.constant - want2) / abs(want2),
        )
        assert np.all(got1.values() == got1.constant) and got1.values().shape == (3,)
    elapsed = time.perf_counter() - started
    verdict(
        2,
        "static baselines match brute-force oracles",
        worst <= 1e-12 and elapsed < 5.0,
        f"1000 random vectors, worst rel err {worst:.2e}, {elapsed:.2f} s",
    )


def test_criterion_3_metric_formulas(verdict):
    started = time.perf_counter()
    ok = True
    notes = []

    # under-allocation: demand 120 against capacity 100
    per = per_timestep_metrics(AllocationTrace("t", [120.0], [100.0]))
    ok &= per["efficiency"][0] == 1.0
    ok &= per["wastage"][0] == 0.0
    ok &= abs(per["utilization"][0] - 1.2) <= 1e-12
    ok &= per["over_provisioning"][0] == 0.0

    # over-allocation: demand 80 against capacity 100
    per = per_timestep_metrics(AllocationTrace("t", [80.0], [100.0]))
    ok &= abs(per["efficiency"][0] - 0.8) <= 1e-12
    ok &= abs(per["wastage"][0] - 0.2) <= 1e-12
    ok &= abs(per["utilization"][0] - 0.8) <= 1e-12
    ok &= per["over_provisioning"][0] == 20.0

    mae, rmse = forecast_errors([2.0, 4.0], [1.0, 2.0])
    ok &= abs(mae - 1.5) <= 1e-12
    ok &= abs(rmse - math.sqrt(2.5)) <= 1e-12
    notes.append(f"hand cases {'ok' if ok else 'FAIL'}")

    rng = np.random.default_rng(7)
    for _ in range(1000):
        actual = rng.uniform(0.0, 1e6, size=50)
        allocated = rng.uniform(1.0, 1.2e6, size=50)
        report = allocation_metrics(AllocationTrace("t", actual, allocated))
        ok &= report.mae <= report.rmse + 1e-9
        per = per_timestep_metrics(AllocationTrace("t", actual, allocated))
        ok &= np.allclose(
            per["wastage"], 1.0 - np.minimum(per["utilization"], 1.0), rtol=0, atol=1e-12
        )
    notes.append("1000 random traces: MAE <= RMSE and wastage = 1 - min(utilization, 1)")

    elapsed = time.perf_counter() - started
    verdict(3, "allocation metric formulas", ok and elapsed < 5.0, f"{'; '.join(notes)}, {elapsed:.2f} s")


def test_criterion_4_forecaster_beats_baselines(pipeline, verdict):
    policies = pipeline.report["policies"]
    ai = policies["ai_dt"]
    b1 = policies["baseline1_mean2sigma"]
    b2 = policies["baseline2_p95"]

    ok = (
        ai["mae"] < b1["mae"]
        and ai["mae"] < b2["mae"]
        and ai["rmse"] < b1["rmse"]
        and ai["rmse"] < b2["rmse"]
        and ai["mean_over_provisioning"] < b1["mean_over_provisioning"]
        and ai["mean_over_provisioning"] < b2["mean_over_provisioning"]
        and ai["efficiency_median"] > b1["efficiency_median"]
        and ai["efficiency_median"] > b2["efficiency_median"]
        and pipeline.elapsed < 600.0
    )
    detail = (
        f"MAE {ai['mae'] / 1e6:.1f} vs {b1['mae'] / 1e6:.1f}/{b2['mae'] / 1e6:.1f} Mbps, "
        f"RMSE {ai['rmse'] / 1e6:.1f} vs {b1['rmse'] / 1e6:.1f}/{b2['rmse'] / 1e6:.1f}, "
        f"mean OP {ai['mean_over_provisioning'] / 1e6:.1f} vs "
        f"{b1['mean_over_provisioning'] / 1e6:.1f}/{b2['mean_over_provisioning'] / 1e6:.1f}, "
        f"median eff {ai['efficiency_median']:.3f} vs "
        f"{b1['efficiency_median']:.3f}/{b2['efficiency_median']:.3f}, "
        f"train+compare {pipeline.elapsed:.0f} s"
    )
    verdict(4, "learned forecaster beats both static baselines", ok, detail)


def test_criterion_5_p95_training_coverage(verdict):
    started = time.perf_counter()
    worst = 1.0
    for seed in (0, 1, 42):
        for length in (500, 1000, 2000):
            config = dataclasses.replace(DEFAULT_5G, seed=seed, length=length)
            series = generate_traffic(config)
            train_series, _, _ = chrono_split(series, SplitSpec(0.8, 0.2))
            targets = train_series.feature("internet")
            level = baseline_p95(targets, horizon=1).constant
            # train split sizes 320/640/1280 are multiples of 20, so the
            # interpolated 95th percentile covers exactly 95% of distinct values
            worst = min(worst, float(np.mean(targets <= level)))
    elapsed = time.perf_counter() - started
    verdict(
        5,
        "P95 baseline covers its training demand",
        worst >= 0.95 and elapsed < 1.0,
        f"9 series (3 seeds x 3 lengths), worst coverage {worst:.4f}, {elapsed:.2f} s",
    )


def test_criterion_6_reproducible_artifacts(pipeline, verdict):
    def without_timings(raw: bytes) -> str:
        payload = json.loads(raw)
        payload.pop("timings", None)
        return json.dumps(payload, sort_keys=True)

    stable_json = all(
        without_timings(pipeline.first[name]) == without_timings(pipeline.second[name])
        for name in REPORT_ARTIFACTS
    )
    stable_charts = all(
        pipeline.first[name] == pipeline.second[name] for name in CHART_ARTIFACTS
    )
    verdict(
        6,
        "identical invocations reproduce artifacts",
        stable_json and stable_charts,
        f"reports match up to timings: {stable_json}; charts byte-identical: {stable_charts}",
    )


def test_criterion_7_parameter_count(verdict):
    def lstm_direction(d_in, h):
        return 4 * h * d_in + 4 * h * h + 4 * h

    expected = 0
    layer_inputs = (4, 256, 256)
    hidden = (128, 128, 64)
    for d_in, h in zip(layer_inputs, hidden):
        expected += 2 * lstm_direction(d_in, h)
    expected += 2 * 128  # batch-norm gamma and beta over the 128-wide representation
    expected += 64 * 128 + 64
    expected += 1 * 64 + 1

    count, size_mb = model_size_report(init_model(4))
    ok = count == expected and size_mb == expected * 4 / 2**20
    verdict(
        7,
        "default model parameter count",
        ok,
        f"{count} parameters ({size_mb:.3f} MB), independent recount {expected}",
    )


def test_criterion_8_early_stopping_contract(monkeypatch, verdict):
    started = time.perf_counter()
    rng = np.random.default_rng(5)
    train_set = WindowedDataset(rng.uniform(0, 1, (40, 6, 4)), rng.uniform(0, 1, 40), 0)
    val_set = WindowedDataset(rng.uniform(0, 1, (10, 6, 4)), rng.uniform(0, 1, 10), 0)
    arch = ArchitectureSpec(hidden_sizes=(4,), dense_hidden=8, dropout_p=0.2)

    def patch_losses():
        losses = iter(float(i) for i in range(1, 100))
        monkeypatch.setattr(
            training_module, "evaluate_mse", lambda model, ds, batch_size=256: next(losses)
        )

    patch_losses()
    config = TrainConfig(max_epochs=30, early_stop_patience=5, seed=3)
    model, report = train(init_model(4, arch, seed=11), train_set, val_set, config)
    stopped_right = (
        report.stopped_early
        and len(report.val_losses) == 6
        and report.best_epoch == 1
        and report.val_losses == (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    )

    # restoring the best epoch must reproduce a one-epoch run bit for bit
    patch_losses()
    one_epoch = dataclasses.replace(config, max_epochs=1)
    reference, _ = train(init_model(4, arch, seed=11), train_set, val_set, one_epoch)
    restored = all(
        np.array_equal(arr, reference.state_arrays()[key])
        for key, arr in model.state_arrays().items()
    )
    elapsed = time.perf_counter() - started
    verdict(
        8,
        "early stopping restores the best epoch",
        stopped_right and restored and elapsed < 10.0,
        f"stopped after {len(report.val_losses)} epochs, best epoch {report.best_epoch}, "
        f"weights bit-identical to a 1-epoch run: {restored}, {elapsed:.1f} s",
    )
