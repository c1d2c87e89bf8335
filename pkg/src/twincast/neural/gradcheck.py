"""Finite-difference verification of the analytic gradients.

Runs seeded tiny models (the full layer path with batch norm, dropout
disabled) and compares every parameter coordinate's analytic gradient
against a central finite difference.  The relative-error measure is
``|ga - gn| / max(1, |ga| + |gn|)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ArchitectureSpec, init_model, mse_loss, mse_loss_grad
from . import model as _model

# referenced through module globals so a test can swap in a corrupted
# implementation and confirm the checker notices
model_forward = _model.forward
model_backward = _model.backward

TINY_ARCH = ArchitectureSpec(
    hidden_sizes=(3, 3, 2), dense_hidden=4, dropout_p=0.0, use_batch_norm=True
)


@dataclass(frozen=True)
class GradCheckReport:
    trials: int
    tolerance: float
    epsilon: float
    max_rel_error: dict[str, float]
    failed_blocks: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failed_blocks

    def summary_lines(self) -> list[str]:
        lines = [
            f"gradient check: {self.trials} trials, tolerance {self.tolerance:g}, "
            f"epsilon {self.epsilon:g}"
        ]
        for block in sorted(self.max_rel_error):
            status = "FAIL" if block in self.failed_blocks else "ok"
            lines.append(f"  {status:4s} {block}: max rel err {self.max_rel_error[block]:.3e}")
        lines.append("PASS" if self.passed else "FAIL")
        return lines


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(1.0, abs(analytic) + abs(numeric))


def grad_check(
    arch: ArchitectureSpec | None = None,
    trials: int = 10,
    tolerance: float = 1e-4,
    *,
    input_dim: int = 3,
    window: int = 5,
    batch: int = 3,
    epsilon: float = 1e-5,
    seed: int = 1234,
) -> GradCheckReport:
    """Compare analytic gradients to central finite differences on ``trials``
    seeded random instances.  Every coordinate of every parameter block is
    probed; the report carries the worst relative error per block."""
    if arch is None:
        arch = TINY_ARCH
    if arch.dropout_p != 0.0:
        raise ValueError("gradient checking requires dropout_p = 0")

    max_err: dict[str, float] = {}
    for trial in range(trials):
        rng = np.random.default_rng(seed + trial)
        model = init_model(input_dim, arch, seed=seed + trial)
        # jitter every parameter into generic position: the fresh init has
        # exact zeros that can park ReLU inputs on the kink, where central
        # differences and the subgradient legitimately disagree
        for param in model.parameters().values():
            param += rng.normal(0.0, 0.05, size=param.shape)
        x = rng.standard_normal((batch, window, input_dim))
        y = rng.standard_normal(batch)

        preds, cache = model_forward(model, x, mode="train")
        _, d_preds = mse_loss_grad(preds, y)
        analytic = model_backward(model, cache, d_preds)

        params = model.parameters()
        for block, param in params.items():
            flat = param.ravel()
            analytic_flat = analytic[block].ravel()
            for idx in range(flat.size):
                original = flat[idx]
                flat[idx] = original + epsilon
                loss_plus = mse_loss(model_forward(model, x, mode="train")[0], y)
                flat[idx] = original - epsilon
                loss_minus = mse_loss(model_forward(model, x, mode="train")[0], y)
                flat[idx] = original
                numeric = (loss_plus - loss_minus) / (2.0 * epsilon)
                err = relative_error(float(analytic_flat[idx]), numeric)
                if err > max_err.get(block, 0.0):
                    max_err[block] = err

    failed = tuple(sorted(b for b, e in max_err.items() if e >= tolerance))
    return GradCheckReport(
        trials=trials,
        tolerance=tolerance,
        epsilon=epsilon,
        max_rel_error=max_err,
        failed_blocks=failed,
    )
