"""Training loop: Adam with bias correction, chronological mini-batches,
reduce-on-plateau learning-rate scheduling, and early stopping with
best-epoch restoration.

Batches are drawn in chronological order every epoch, never shuffled, so a
fixed seed and config reproduce training bit-for-bit.  Validation loss
drives both the scheduler and early stopping; an empty (or missing)
validation set disables both and the final parameters are returned as-is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergenceError, ShapeError, TrainingError
from ..timeseries import FeatureScaler, WindowedDataset
from .model import BiLstmModel, backward, forward, mse_loss, mse_loss_grad

EVAL_BATCH_SIZE = 256


@dataclass(frozen=True)
class TrainConfig:
    max_epochs: int = 30
    early_stop_patience: int = 5
    batch_size: int = 32
    learning_rate: float = 1e-4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    lr_plateau_factor: float = 0.5
    lr_plateau_patience: int = 2
    lr_min: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.max_epochs < 0:
            raise ValueError("max_epochs must be >= 0")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 <= self.adam_beta1 < 1 or not 0 <= self.adam_beta2 < 1:
            raise ValueError("adam betas must lie in [0, 1)")
        if self.adam_epsilon <= 0:
            raise ValueError("adam_epsilon must be positive")
        if not 0 < self.lr_plateau_factor < 1:
            raise ValueError("lr_plateau_factor must lie in (0, 1)")
        if self.lr_plateau_patience < 1:
            raise ValueError("lr_plateau_patience must be >= 1")
        if self.lr_min <= 0:
            raise ValueError("lr_min must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def to_dict(self) -> dict:
        return {
            "max_epochs": self.max_epochs,
            "early_stop_patience": self.early_stop_patience,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "adam_beta1": self.adam_beta1,
            "adam_beta2": self.adam_beta2,
            "adam_epsilon": self.adam_epsilon,
            "lr_plateau_factor": self.lr_plateau_factor,
            "lr_plateau_patience": self.lr_plateau_patience,
            "lr_min": self.lr_min,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class TrainReport:
    train_losses: tuple[float, ...]
    val_losses: tuple[float, ...]
    best_epoch: int
    stopped_early: bool
    final_learning_rate: float

    def to_dict(self) -> dict:
        return {
            "train_losses": list(self.train_losses),
            "val_losses": list(self.val_losses),
            "best_epoch": self.best_epoch,
            "stopped_early": self.stopped_early,
            "final_learning_rate": self.final_learning_rate,
        }


@dataclass
class AdamState:
    """First/second moment estimates per parameter, the shared step counter,
    and the current (scheduler-adjusted) learning rate."""

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    step: int = 0
    learning_rate: float = 1e-4

    @classmethod
    def for_params(cls, params: dict[str, np.ndarray], config: TrainConfig) -> "AdamState":
        return cls(
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
            step=0,
            learning_rate=config.learning_rate,
        )


def adam_step(params: dict, grads: dict, state: AdamState, config: TrainConfig) -> None:
    """One bias-corrected Adam update, in place, at ``state.learning_rate``."""
    state.step += 1
    b1, b2, eps = config.adam_beta1, config.adam_beta2, config.adam_epsilon
    corr1 = 1.0 - b1**state.step
    corr2 = 1.0 - b2**state.step
    for key, param in params.items():
        grad = grads[key]
        if grad.shape != param.shape:
            raise ShapeError(
                f"gradient for {key} has shape {grad.shape}, parameter has {param.shape}"
            )
        m = state.m[key]
        v = state.v[key]
        m *= b1
        m += (1.0 - b1) * grad
        v *= b2
        v += (1.0 - b2) * grad * grad
        param -= state.learning_rate * (m / corr1) / (np.sqrt(v / corr2) + eps)


def evaluate_mse(model: BiLstmModel, dataset: WindowedDataset, batch_size: int = EVAL_BATCH_SIZE) -> float:
    """Infer-mode MSE over a whole dataset (chunked, chunking-invariant)."""
    preds = np.empty(len(dataset))
    for start in range(0, len(dataset), batch_size):
        chunk = dataset.inputs[start : start + batch_size]
        preds[start : start + len(chunk)], _ = forward(model, chunk, mode="infer")
    return mse_loss(preds, dataset.targets)


def _chronological_batches(n: int, batch_size: int):
    for start in range(0, n, batch_size):
        yield start, min(start + batch_size, n)


def train(
    model: BiLstmModel,
    train_set: WindowedDataset,
    val_set: WindowedDataset | None,
    config: TrainConfig,
) -> tuple[BiLstmModel, TrainReport]:
    """Fit ``model`` in place and return it with the per-epoch report.

    Early stopping tracks the best validation loss; on stop (or at
    max_epochs) the best epoch's parameters and batch-norm statistics are
    restored.  The plateau scheduler halves the learning rate after
    ``lr_plateau_patience`` consecutive epochs without improvement, never
    below ``lr_min``.  A non-finite batch loss aborts with the offending
    epoch and batch.
    """
    if train_set is None or len(train_set) == 0:
        raise TrainingError("training set is empty")
    validate = val_set is not None and len(val_set) > 0

    params = model.parameters()
    adam = AdamState.for_params(params, config)
    dropout_rng = np.random.default_rng(config.seed)

    train_losses: list[float] = []
    val_losses: list[float] = []
    best_val = np.inf
    best_epoch = 0
    best_snapshot = None
    stopped_early = False
    epochs_without_improvement = 0
    plateau_wait = 0

    for epoch in range(1, config.max_epochs + 1):
        sq_err_sum = 0.0
        for batch_index, (start, stop) in enumerate(
            _chronological_batches(len(train_set), config.batch_size)
        ):
            inputs = train_set.inputs[start:stop]
            targets = train_set.targets[start:stop]
            preds, cache = forward(model, inputs, mode="train", rng=dropout_rng)
            loss, d_preds = mse_loss_grad(preds, targets)
            if not np.isfinite(loss):
                raise DivergenceError(
                    f"non-finite training loss at epoch {epoch}, batch {batch_index}"
                )
            grads = backward(model, cache, d_preds)
            adam_step(params, grads, adam, config)
            sq_err_sum += loss * (stop - start)
        train_losses.append(sq_err_sum / len(train_set))

        if not validate:
            best_epoch = epoch
            continue

        val_loss = evaluate_mse(model, val_set)
        if not np.isfinite(val_loss):
            raise DivergenceError(f"non-finite validation loss at epoch {epoch}")
        val_losses.append(val_loss)

        if val_loss < best_val:
            best_val = val_loss
            best_epoch = epoch
            best_snapshot = model.snapshot()
            epochs_without_improvement = 0
            plateau_wait = 0
        else:
            epochs_without_improvement += 1
            plateau_wait += 1
            if plateau_wait >= config.lr_plateau_patience:
                adam.learning_rate = max(
                    adam.learning_rate * config.lr_plateau_factor, config.lr_min
                )
                plateau_wait = 0
            if epochs_without_improvement >= config.early_stop_patience:
                stopped_early = True
                break

    if validate and best_snapshot is not None:
        model.load_snapshot(best_snapshot)

    report = TrainReport(
        train_losses=tuple(train_losses),
        val_losses=tuple(val_losses),
        best_epoch=best_epoch,
        stopped_early=stopped_early,
        final_learning_rate=adam.learning_rate,
    )
    return model, report


def predict_series(model: BiLstmModel, dataset: WindowedDataset, scaler: FeatureScaler) -> np.ndarray:
    """Infer-mode forecasts for every window, inverse-scaled to raw units."""
    preds = np.empty(len(dataset))
    for start in range(0, len(dataset), EVAL_BATCH_SIZE):
        chunk = dataset.inputs[start : start + EVAL_BATCH_SIZE]
        preds[start : start + len(chunk)], _ = forward(model, chunk, mode="infer")
    return scaler.inverse_feature(preds, dataset.target_feature_index)
