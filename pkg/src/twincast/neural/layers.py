"""Numerical building blocks: LSTM direction passes, batch norm, dropout,
dense layers, and their exact analytic gradients.

All arithmetic is double precision.  Each forward returns the cache its
backward needs; caches are plain dicts of arrays.  The LSTM gate layout is
pinned: the 4h-wide pre-activation stacks (input, forget, cell-candidate,
output) gates in that order.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit as sigmoid


def lstm_direction_forward(x, w_x, w_h, b):
    """Run one LSTM direction over ``x`` [b, t, d] with zero initial states.

    Returns (h_seq [b, t, h], cache).  The input projection for every step
    is batched into a single matmul; only the recurrent term stays in the
    time loop.
    """
    n_batch, n_steps, _ = x.shape
    hidden = w_h.shape[1]
    proj = x.reshape(n_batch * n_steps, -1) @ w_x.T
    proj = proj.reshape(n_batch, n_steps, 4 * hidden) + b

    h_seq = np.empty((n_batch, n_steps, hidden))
    gates_i = np.empty_like(h_seq)
    gates_f = np.empty_like(h_seq)
    gates_g = np.empty_like(h_seq)
    gates_o = np.empty_like(h_seq)
    c_prev_seq = np.empty_like(h_seq)
    tanh_c_seq = np.empty_like(h_seq)

    h = np.zeros((n_batch, hidden))
    c = np.zeros((n_batch, hidden))
    for t in range(n_steps):
        z = proj[:, t] + h @ w_h.T
        i = sigmoid(z[:, :hidden])
        f = sigmoid(z[:, hidden : 2 * hidden])
        g = np.tanh(z[:, 2 * hidden : 3 * hidden])
        o = sigmoid(z[:, 3 * hidden :])
        c_prev_seq[:, t] = c
        c = f * c + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        gates_i[:, t] = i
        gates_f[:, t] = f
        gates_g[:, t] = g
        gates_o[:, t] = o
        tanh_c_seq[:, t] = tanh_c
        h_seq[:, t] = h

    cache = {
        "x": x,
        "h_seq": h_seq,
        "i": gates_i,
        "f": gates_f,
        "g": gates_g,
        "o": gates_o,
        "c_prev": c_prev_seq,
        "tanh_c": tanh_c_seq,
    }
    return h_seq, cache


def lstm_direction_backward(d_h_seq, cache, w_x, w_h):
    """Backpropagate through one LSTM direction.

    ``d_h_seq`` [b, t, h] is the loss gradient w.r.t. every step's hidden
    output (zero-filled except where the layer output was consumed).
    Returns (d_x, d_w_x, d_w_h, d_b).  Per-step work is elementwise plus one
    [b, h] x [h, 4h] matmul; the parameter gradients collapse into two
    matmuls after the loop.
    """
    x = cache["x"]
    n_batch, n_steps, hidden = cache["h_seq"].shape
    i, f, g, o = cache["i"], cache["f"], cache["g"], cache["o"]
    c_prev, tanh_c = cache["c_prev"], cache["tanh_c"]

    dz_all = np.empty((n_batch, n_steps, 4 * hidden))
    dh_carry = np.zeros((n_batch, hidden))
    dc_carry = np.zeros((n_batch, hidden))
    for t in range(n_steps - 1, -1, -1):
        dh = d_h_seq[:, t] + dh_carry
        it, ft, gt, ot = i[:, t], f[:, t], g[:, t], o[:, t]
        tct = tanh_c[:, t]
        do = dh * tct
        dc = dc_carry + dh * ot * (1.0 - tct * tct)
        di = dc * gt
        df = dc * c_prev[:, t]
        dg = dc * it
        dc_carry = dc * ft
        dz = dz_all[:, t]
        dz[:, :hidden] = di * it * (1.0 - it)
        dz[:, hidden : 2 * hidden] = df * ft * (1.0 - ft)
        dz[:, 2 * hidden : 3 * hidden] = dg * (1.0 - gt * gt)
        dz[:, 3 * hidden :] = do * ot * (1.0 - ot)
        dh_carry = dz @ w_h

    # h fed into step t is h_seq[t-1], zero at t=0
    h_prev_seq = np.zeros_like(cache["h_seq"])
    h_prev_seq[:, 1:] = cache["h_seq"][:, :-1]

    dz_flat = dz_all.reshape(n_batch * n_steps, 4 * hidden)
    d_w_x = dz_flat.T @ x.reshape(n_batch * n_steps, -1)
    d_w_h = dz_flat.T @ h_prev_seq.reshape(n_batch * n_steps, hidden)
    d_b = dz_flat.sum(axis=0)
    d_x = (dz_flat @ w_x).reshape(x.shape)
    return d_x, d_w_x, d_w_h, d_b


def bilstm_forward(x, fwd_params, bwd_params, returns_sequence):
    """Bidirectional pass: forward cell on ``x``, backward cell on the
    time-reversed input.  Sequence output concatenates per-step
    [forward; backward] states realigned to original time; final-state
    output concatenates the forward last state with the backward cell's
    state at original t=0.
    """
    h_fwd, cache_fwd = lstm_direction_forward(x, *fwd_params)
    x_rev = x[:, ::-1]
    h_rev, cache_bwd = lstm_direction_forward(x_rev, *bwd_params)
    if returns_sequence:
        out = np.concatenate([h_fwd, h_rev[:, ::-1]], axis=2)
    else:
        out = np.concatenate([h_fwd[:, -1], h_rev[:, -1]], axis=1)
    return out, {"fwd": cache_fwd, "bwd": cache_bwd, "returns_sequence": returns_sequence}


def bilstm_backward(d_out, cache, fwd_params, bwd_params):
    """Backward for :func:`bilstm_forward`.

    Returns (d_x, grads_fwd, grads_bwd) where each grads tuple is
    (d_w_x, d_w_h, d_b).
    """
    h_fwd = cache["fwd"]["h_seq"]
    n_batch, n_steps, hidden = h_fwd.shape
    d_h_fwd = np.zeros_like(h_fwd)
    d_h_rev = np.zeros_like(h_fwd)
    if cache["returns_sequence"]:
        d_h_fwd[...] = d_out[:, :, :hidden]
        d_h_rev[...] = d_out[:, :, hidden:][:, ::-1]
    else:
        d_h_fwd[:, -1] = d_out[:, :hidden]
        d_h_rev[:, -1] = d_out[:, hidden:]

    d_x_fwd, dwx_f, dwh_f, db_f = lstm_direction_backward(
        d_h_fwd, cache["fwd"], fwd_params[0], fwd_params[1]
    )
    d_x_rev, dwx_b, dwh_b, db_b = lstm_direction_backward(
        d_h_rev, cache["bwd"], bwd_params[0], bwd_params[1]
    )
    d_x = d_x_fwd + d_x_rev[:, ::-1]
    return d_x, (dwx_f, dwh_f, db_f), (dwx_b, dwh_b, db_b)


class BatchNorm:
    """Per-feature batch normalization over 2-D activations [b, features].

    Train mode normalizes with batch statistics (biased variance) and blends
    them into the running estimates; infer mode uses the running estimates
    and touches nothing.
    """

    def __init__(self, num_features, momentum=0.9, eps=1e-5):
        self.gamma = np.ones(num_features)
        self.beta = np.zeros(num_features)
        self.running_mean = np.zeros(num_features)
        self.running_var = np.ones(num_features)
        self.momentum = momentum
        self.eps = eps

    def forward(self, x, mode):
        if mode == "train":
            mean = x.mean(axis=0)
            var = x.var(axis=0)
            # in place so live references (snapshots, optimizers) stay valid
            self.running_mean *= self.momentum
            self.running_mean += (1.0 - self.momentum) * mean
            self.running_var *= self.momentum
            self.running_var += (1.0 - self.momentum) * var
        else:
            mean = self.running_mean
            var = self.running_var
        inv_std = 1.0 / np.sqrt(var + self.eps)
        x_hat = (x - mean) * inv_std
        out = self.gamma * x_hat + self.beta
        cache = {"x_hat": x_hat, "inv_std": inv_std}
        return out, cache

    def backward(self, d_out, cache):
        """Gradients for a train-mode forward.  Returns (d_x, d_gamma, d_beta)."""
        x_hat, inv_std = cache["x_hat"], cache["inv_std"]
        n = d_out.shape[0]
        d_gamma = (d_out * x_hat).sum(axis=0)
        d_beta = d_out.sum(axis=0)
        d_x_hat = d_out * self.gamma
        d_x = (inv_std / n) * (
            n * d_x_hat - d_x_hat.sum(axis=0) - x_hat * (d_x_hat * x_hat).sum(axis=0)
        )
        return d_x, d_gamma, d_beta


def dropout_forward(x, p, rng):
    """Inverted dropout: zero with probability ``p``, scale by 1/(1-p)."""
    if p == 0.0:
        return x, None
    mask = rng.random(x.shape) >= p
    return x * mask / (1.0 - p), mask


def dropout_backward(d_out, mask, p):
    if mask is None:
        return d_out
    return d_out * mask / (1.0 - p)


def dense_forward(x, w, b):
    """Affine map with weights [out, in]: ``x @ w.T + b``."""
    return x @ w.T + b


def dense_backward(d_out, x, w):
    """Returns (d_x, d_w, d_b) for :func:`dense_forward`."""
    d_w = d_out.T @ x
    d_b = d_out.sum(axis=0)
    d_x = d_out @ w
    return d_x, d_w, d_b


def relu(x):
    return np.maximum(x, 0.0)


def relu_backward(d_out, x):
    return d_out * (x > 0.0)
