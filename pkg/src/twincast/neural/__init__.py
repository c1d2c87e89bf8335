"""From-scratch bidirectional LSTM forecaster and its training machinery."""

from .gradcheck import TINY_ARCH, GradCheckReport, grad_check, relative_error
from .model import (
    ArchitectureSpec,
    BiLstmLayer,
    BiLstmModel,
    LstmCellParams,
    backward,
    forward,
    init_model,
    load_checkpoint,
    model_size_report,
    mse_loss,
    mse_loss_grad,
    save_checkpoint,
)
from .training import (
    AdamState,
    TrainConfig,
    TrainReport,
    adam_step,
    evaluate_mse,
    predict_series,
    train,
)

__all__ = [
    "AdamState",
    "ArchitectureSpec",
    "BiLstmLayer",
    "BiLstmModel",
    "GradCheckReport",
    "LstmCellParams",
    "TINY_ARCH",
    "TrainConfig",
    "TrainReport",
    "adam_step",
    "backward",
    "evaluate_mse",
    "forward",
    "grad_check",
    "init_model",
    "load_checkpoint",
    "model_size_report",
    "mse_loss",
    "mse_loss_grad",
    "predict_series",
    "relative_error",
    "save_checkpoint",
    "train",
]
