"""Bidirectional LSTM forecaster: architecture, initialization, the full
forward/backward passes, and checkpoint serialization.

A model maps a scaled input window [b, t, d] to one scalar forecast per
row.  The reference architecture stacks three bidirectional LSTM layers
(128, 128, 64; the first two return sequences, the third returns the final
concatenated state), applies dropout after every LSTM layer, batch-norms
the 128-wide representation, and finishes with Dense(64)+ReLU -> Dense(1).

Parameters live in plain float64 arrays addressed by dotted names (for
example ``layers.0.fwd.input_weights``); the same names key gradients,
optimizer moments, and checkpoint entries.  Checkpoints are ``.npz``
archives with single-precision arrays plus one JSON metadata entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import CompatibilityError, ShapeError, StateError
from ..timeseries import FeatureScaler
from . import layers as L

CHECKPOINT_SCHEMA_VERSION = 1
BYTES_PER_PARAMETER = 4
GATES_PER_CELL = 4
_MODES = ("train", "infer")


@dataclass
class ArchitectureSpec:
    """Shape-level description of a model, independent of its weights."""

    hidden_sizes: tuple[int, ...] = (128, 128, 64)
    dense_hidden: int | None = 64
    dropout_p: float = 0.2
    use_batch_norm: bool = True

    def __post_init__(self):
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)
        if any(h < 1 for h in self.hidden_sizes):
            raise ValueError("hidden sizes must be positive")
        if self.dense_hidden is not None and self.dense_hidden < 1:
            raise ValueError("dense_hidden must be positive or None")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError("dropout_p must lie in [0, 1)")

    def to_dict(self) -> dict:
        return {
            "hidden_sizes": list(self.hidden_sizes),
            "dense_hidden": self.dense_hidden,
            "dropout_p": self.dropout_p,
            "use_batch_norm": self.use_batch_norm,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ArchitectureSpec":
        return cls(
            hidden_sizes=tuple(payload["hidden_sizes"]),
            dense_hidden=payload["dense_hidden"],
            dropout_p=payload["dropout_p"],
            use_batch_norm=payload["use_batch_norm"],
        )


@dataclass
class LstmCellParams:
    """One direction's weights: gate order (input, forget, cell-candidate,
    output) stacked along the leading 4h axis."""

    input_weights: np.ndarray
    recurrent_weights: np.ndarray
    biases: np.ndarray

    @property
    def hidden_size(self) -> int:
        return self.recurrent_weights.shape[1]

    def as_tuple(self):
        return self.input_weights, self.recurrent_weights, self.biases


@dataclass
class BiLstmLayer:
    forward_cell: LstmCellParams
    backward_cell: LstmCellParams
    hidden_size: int
    returns_sequence: bool


@dataclass
class BiLstmModel:
    input_dim: int
    arch: ArchitectureSpec
    layers: list[BiLstmLayer]
    batch_norm: L.BatchNorm | None
    dense_hidden_w: np.ndarray | None
    dense_hidden_b: np.ndarray | None
    dense_out_w: np.ndarray = field(default=None)
    dense_out_b: np.ndarray = field(default=None)
    seed: int = 0

    @property
    def representation_width(self) -> int:
        if self.layers:
            return 2 * self.layers[-1].hidden_size
        return self.input_dim

    def parameters(self) -> dict[str, np.ndarray]:
        """Live references to every trainable array, keyed by dotted name."""
        out: dict[str, np.ndarray] = {}
        for idx, layer in enumerate(self.layers):
            for tag, cell in (("fwd", layer.forward_cell), ("bwd", layer.backward_cell)):
                out[f"layers.{idx}.{tag}.input_weights"] = cell.input_weights
                out[f"layers.{idx}.{tag}.recurrent_weights"] = cell.recurrent_weights
                out[f"layers.{idx}.{tag}.biases"] = cell.biases
        if self.batch_norm is not None:
            out["batch_norm.gamma"] = self.batch_norm.gamma
            out["batch_norm.beta"] = self.batch_norm.beta
        if self.dense_hidden_w is not None:
            out["dense_hidden.weights"] = self.dense_hidden_w
            out["dense_hidden.bias"] = self.dense_hidden_b
        out["dense_out.weights"] = self.dense_out_w
        out["dense_out.bias"] = self.dense_out_b
        return out

    def state_arrays(self) -> dict[str, np.ndarray]:
        """Parameters plus the non-trainable batch-norm running statistics."""
        out = self.parameters()
        if self.batch_norm is not None:
            out["batch_norm.running_mean"] = self.batch_norm.running_mean
            out["batch_norm.running_var"] = self.batch_norm.running_var
        return out

    def snapshot(self) -> dict[str, np.ndarray]:
        return {k: v.copy() for k, v in self.state_arrays().items()}

    def load_snapshot(self, snap: dict[str, np.ndarray]) -> None:
        live = self.state_arrays()
        if set(live) != set(snap):
            raise StateError("snapshot keys do not match this model")
        for key, arr in live.items():
            arr[...] = snap[key]


def _glorot_uniform(rng, fan_in, fan_out, shape):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def _orthogonal(rng, size):
    a = rng.standard_normal((size, size))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.diag(r))


def _init_cell(rng, input_dim, hidden) -> LstmCellParams:
    w_x = _glorot_uniform(rng, input_dim, GATES_PER_CELL * hidden, (GATES_PER_CELL * hidden, input_dim))
    w_h = np.vstack([_orthogonal(rng, hidden) for _ in range(GATES_PER_CELL)])
    b = np.zeros(GATES_PER_CELL * hidden)
    b[hidden : 2 * hidden] = 1.0  # forget-gate bias starts open
    return LstmCellParams(w_x, w_h, b)


def init_model(input_dim: int, arch: ArchitectureSpec | None = None, seed: int = 0) -> BiLstmModel:
    """Build a model with Glorot-uniform input weights, orthogonal recurrent
    weights, and zero biases except the forget gates (set to 1).  The draw
    order is fixed, so one seed always yields bit-identical parameters."""
    if input_dim < 1:
        raise ValueError("input_dim must be >= 1")
    if arch is None:
        arch = ArchitectureSpec()
    rng = np.random.default_rng(seed)

    model_layers: list[BiLstmLayer] = []
    feed = input_dim
    for pos, hidden in enumerate(arch.hidden_sizes):
        fwd = _init_cell(rng, feed, hidden)
        bwd = _init_cell(rng, feed, hidden)
        returns_sequence = pos < len(arch.hidden_sizes) - 1
        model_layers.append(BiLstmLayer(fwd, bwd, hidden, returns_sequence))
        feed = 2 * hidden

    bn = L.BatchNorm(feed) if arch.use_batch_norm else None

    if arch.dense_hidden is not None:
        dh_w = _glorot_uniform(rng, feed, arch.dense_hidden, (arch.dense_hidden, feed))
        dh_b = np.zeros(arch.dense_hidden)
        head_in = arch.dense_hidden
    else:
        dh_w = dh_b = None
        head_in = feed
    out_w = _glorot_uniform(rng, head_in, 1, (1, head_in))
    out_b = np.zeros(1)

    return BiLstmModel(
        input_dim=input_dim,
        arch=arch,
        layers=model_layers,
        batch_norm=bn,
        dense_hidden_w=dh_w,
        dense_hidden_b=dh_b,
        dense_out_w=out_w,
        dense_out_b=out_b,
        seed=seed,
    )


def forward(model: BiLstmModel, batch, mode: str = "infer", rng=None):
    """Run the model on a scaled window batch [b, t, d].

    Returns (predictions [b], cache).  Train mode applies inverted dropout
    (consuming ``rng``) and batch statistics; infer mode is a pure function
    of the inputs and parameters.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}")
    x = np.asarray(batch, dtype=np.float64)
    if x.ndim != 3:
        raise ShapeError(f"batch must be rank-3 [b, t, d], got rank {x.ndim}")
    if x.shape[2] != model.input_dim:
        raise ShapeError(
            f"feature axis has size {x.shape[2]}, model expects {model.input_dim}"
        )
    if x.shape[1] < 1:
        raise ShapeError("time axis must have at least one step")
    train = mode == "train"
    if train and model.arch.dropout_p > 0.0 and rng is None:
        raise StateError("train-mode forward with dropout needs an rng")

    cache: dict = {"model_id": id(model), "mode": mode, "layer": [], "dropout": []}
    out = x
    for layer in model.layers:
        out, layer_cache = L.bilstm_forward(
            out,
            layer.forward_cell.as_tuple(),
            layer.backward_cell.as_tuple(),
            layer.returns_sequence,
        )
        cache["layer"].append(layer_cache)
        if train:
            out, mask = L.dropout_forward(out, model.arch.dropout_p, rng)
        else:
            mask = None
        cache["dropout"].append(mask)

    if not model.layers:
        out = x[:, -1, :]  # degenerate head-only model reads the last step
    representation = out
    cache["representation"] = representation

    if model.batch_norm is not None:
        out, bn_cache = model.batch_norm.forward(out, mode)
        cache["bn"] = bn_cache

    if model.dense_hidden_w is not None:
        cache["dense_hidden_in"] = out
        pre = L.dense_forward(out, model.dense_hidden_w, model.dense_hidden_b)
        cache["dense_hidden_pre"] = pre
        out = L.relu(pre)

    cache["dense_out_in"] = out
    preds = L.dense_forward(out, model.dense_out_w, model.dense_out_b)[:, 0]
    cache["predictions"] = preds
    return preds, cache


def backward(model: BiLstmModel, cache: dict, d_preds) -> dict[str, np.ndarray]:
    """Exact gradients of the loss w.r.t. every trainable parameter, given
    the train-mode forward cache and the loss gradient on the predictions."""
    if cache.get("model_id") != id(model):
        raise StateError("cache was produced by a different model instance")
    if cache.get("mode") != "train":
        raise StateError("backward needs a train-mode forward cache")
    d_preds = np.asarray(d_preds, dtype=np.float64)
    if d_preds.shape != cache["predictions"].shape:
        raise ShapeError(
            f"loss gradient has shape {d_preds.shape}, predictions have "
            f"{cache['predictions'].shape}"
        )

    grads: dict[str, np.ndarray] = {}
    d_out = d_preds[:, None]
    d_out, grads["dense_out.weights"], grads["dense_out.bias"] = L.dense_backward(
        d_out, cache["dense_out_in"], model.dense_out_w
    )

    if model.dense_hidden_w is not None:
        d_out = L.relu_backward(d_out, cache["dense_hidden_pre"])
        d_out, grads["dense_hidden.weights"], grads["dense_hidden.bias"] = L.dense_backward(
            d_out, cache["dense_hidden_in"], model.dense_hidden_w
        )

    if model.batch_norm is not None:
        d_out, grads["batch_norm.gamma"], grads["batch_norm.beta"] = model.batch_norm.backward(
            d_out, cache["bn"]
        )

    for idx in range(len(model.layers) - 1, -1, -1):
        layer = model.layers[idx]
        d_out = L.dropout_backward(d_out, cache["dropout"][idx], model.arch.dropout_p)
        d_out, grads_fwd, grads_bwd = L.bilstm_backward(
            d_out,
            cache["layer"][idx],
            layer.forward_cell.as_tuple(),
            layer.backward_cell.as_tuple(),
        )
        for tag, (dwx, dwh, db) in (("fwd", grads_fwd), ("bwd", grads_bwd)):
            grads[f"layers.{idx}.{tag}.input_weights"] = dwx
            grads[f"layers.{idx}.{tag}.recurrent_weights"] = dwh
            grads[f"layers.{idx}.{tag}.biases"] = db
    return grads


def mse_loss(predictions, targets) -> float:
    """Mean squared error ``(1/N) sum (y - yhat)^2``."""
    p = np.asarray(predictions, dtype=np.float64).ravel()
    t = np.asarray(targets, dtype=np.float64).ravel()
    if p.shape != t.shape:
        raise ShapeError(f"predictions and targets lengths differ: {p.size} vs {t.size}")
    if p.size == 0:
        raise ShapeError("need at least one prediction")
    return float(np.mean((p - t) ** 2))


def mse_loss_grad(predictions, targets):
    """Loss and its gradient w.r.t. the predictions: ``2 (yhat - y) / N``."""
    p = np.asarray(predictions, dtype=np.float64).ravel()
    t = np.asarray(targets, dtype=np.float64).ravel()
    loss = mse_loss(p, t)
    return loss, 2.0 * (p - t) / p.size


def model_size_report(model: BiLstmModel) -> tuple[int, float]:
    """Trainable-parameter count and its single-precision footprint in MiB."""
    count = sum(arr.size for arr in model.parameters().values())
    return count, count * BYTES_PER_PARAMETER / 2**20


def save_checkpoint(path, model: BiLstmModel, scaler: FeatureScaler, extra: dict | None = None):
    """Write an ``.npz`` checkpoint: single-precision model arrays, the
    scaler state, and a JSON metadata entry (architecture, seed, caller
    extras).  Enough to reload and reproduce predictions bit-for-bit at
    single precision."""
    meta = {
        "schema_version": CHECKPOINT_SCHEMA_VERSION,
        "input_dim": model.input_dim,
        "arch": model.arch.to_dict(),
        "seed": model.seed,
        "extra": extra or {},
    }
    payload = {
        key: arr.astype(np.float32) for key, arr in model.state_arrays().items()
    }
    payload["scaler.feature_min"] = scaler.feature_min.astype(np.float64)
    payload["scaler.feature_max"] = scaler.feature_max.astype(np.float64)
    payload["__meta__"] = np.frombuffer(
        json.dumps(meta, sort_keys=True).encode("utf-8"), dtype=np.uint8
    )
    with open(path, "wb") as fh:
        np.savez(fh, **payload)


def load_checkpoint(path) -> tuple[BiLstmModel, FeatureScaler, dict]:
    """Reload a checkpoint written by :func:`save_checkpoint`."""
    with np.load(path) as archive:
        if "__meta__" not in archive:
            raise CompatibilityError("not a model checkpoint: missing metadata entry")
        meta = json.loads(bytes(archive["__meta__"]).decode("utf-8"))
        if meta.get("schema_version") != CHECKPOINT_SCHEMA_VERSION:
            raise CompatibilityError(
                f"checkpoint schema {meta.get('schema_version')!r} is not supported"
            )
        arrays = {k: archive[k] for k in archive.files if k != "__meta__"}

    model = init_model(meta["input_dim"], ArchitectureSpec.from_dict(meta["arch"]), meta["seed"])
    live = model.state_arrays()
    missing = sorted(set(live) - set(arrays))
    if missing:
        raise CompatibilityError(f"checkpoint is missing arrays: {', '.join(missing)}")
    for key, arr in live.items():
        stored = arrays[key].astype(np.float64)
        if stored.shape != arr.shape:
            raise CompatibilityError(
                f"checkpoint array {key} has shape {stored.shape}, expected {arr.shape}"
            )
        arr[...] = stored
    scaler = FeatureScaler(arrays["scaler.feature_min"], arrays["scaler.feature_max"])
    return model, scaler, meta["extra"]
