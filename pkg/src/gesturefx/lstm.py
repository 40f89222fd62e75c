"""LSTM cell, windowed forward pass, backpropagation through time, and
inverted dropout.

Gate equations (no peepholes), with sigmoid s and elementwise *:

    i = s(W_i x + U_i h + b_i)      f = s(W_f x + U_f h + b_f)
    o = s(W_o x + U_o h + b_o)      g = tanh(W_g x + U_g h + b_g)
    c' = f * c + i * g              h' = o * tanh(c')

Gate weights are stored stacked along the first axis in the order
[i, f, o, g], so one matmul per timestep computes all four pre-activations.
Every forward over a window starts from h0 = c0 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, StateError
from .numeric import Rng, sigmoid, xavier_init

__all__ = [
    "LstmParams",
    "LstmTape",
    "init_lstm_params",
    "lstm_cell_forward",
    "lstm_forward_window",
    "lstm_backward_window",
    "dropout",
    "dropout_mask",
]


@dataclass
class LstmParams:
    """Stacked gate parameters: w (4H, d_in), u (4H, H), b (4H,)."""

    w: np.ndarray
    u: np.ndarray
    b: np.ndarray

    @property
    def hidden(self) -> int:
        return self.u.shape[1]

    @property
    def d_in(self) -> int:
        return self.w.shape[1]

    def _gate(self, arr, k):
        h = self.hidden
        return arr[k * h : (k + 1) * h]

    # Per-gate views, order i, f, o, g.
    @property
    def w_i(self):
        return self._gate(self.w, 0)

    @property
    def w_f(self):
        return self._gate(self.w, 1)

    @property
    def w_o(self):
        return self._gate(self.w, 2)

    @property
    def w_g(self):
        return self._gate(self.w, 3)

    @property
    def u_i(self):
        return self._gate(self.u, 0)

    @property
    def u_f(self):
        return self._gate(self.u, 1)

    @property
    def u_o(self):
        return self._gate(self.u, 2)

    @property
    def u_g(self):
        return self._gate(self.u, 3)

    @property
    def b_i(self):
        return self._gate(self.b, 0)

    @property
    def b_f(self):
        return self._gate(self.b, 1)

    @property
    def b_o(self):
        return self._gate(self.b, 2)

    @property
    def b_g(self):
        return self._gate(self.b, 3)


def init_lstm_params(d_in: int, hidden: int, rng: Rng, forget_bias: float = 1.0) -> LstmParams:
    """Xavier-initialized gate weights; forget-gate bias starts at `forget_bias`."""
    w = np.vstack([xavier_init(hidden, d_in, rng) for _ in range(4)])
    u = np.vstack([xavier_init(hidden, hidden, rng) for _ in range(4)])
    b = np.zeros(4 * hidden)
    b[hidden : 2 * hidden] = forget_bias
    return LstmParams(w=w, u=u, b=b)


def _split_gates(a, hidden):
    return (
        a[..., :hidden],
        a[..., hidden : 2 * hidden],
        a[..., 2 * hidden : 3 * hidden],
        a[..., 3 * hidden :],
    )


def lstm_cell_forward(x, h, c, params: LstmParams):
    """One LSTM step. Accepts vectors (d,) / (H,) or batches (B, d) / (B, H).

    Returns (h', c') with the same batching as the inputs.
    """
    x = np.asarray(x, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    if x.shape[-1] != params.d_in:
        raise DimensionError(f"input width {x.shape[-1]} != d_in {params.d_in}")
    if h.shape[-1] != params.hidden or c.shape[-1] != params.hidden:
        raise DimensionError(
            f"state widths {h.shape[-1]}/{c.shape[-1]} != hidden {params.hidden}"
        )
    if x.shape[:-1] != h.shape[:-1] or h.shape != c.shape:
        raise DimensionError(f"batch mismatch: x {x.shape}, h {h.shape}, c {c.shape}")
    a = x @ params.w.T + h @ params.u.T + params.b
    i, f, o = (sigmoid(gate) for gate in _split_gates(a, params.hidden)[:3])
    g = np.tanh(_split_gates(a, params.hidden)[3])
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    return h_new, c_new


@dataclass
class LstmTape:
    """Per-timestep activations cached by lstm_forward_window.

    All arrays have a leading time axis of length T and a batch axis, even
    when the caller passed unbatched frames (then B = 1 and `batched` is
    False so gradients are squeezed back).
    """

    x: np.ndarray  # (T, B, d_in)
    i: np.ndarray  # (T, B, H)
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    c: np.ndarray  # cell state after each step
    h: np.ndarray  # hidden state after each step
    batched: bool

    @property
    def length(self) -> int:
        return self.x.shape[0]

    @property
    def batch(self) -> int:
        return self.x.shape[1]


def lstm_forward_window(frames, params: LstmParams):
    """Fold the cell over a window of frames, starting from zero state.

    frames: (T, d_in) for a single sequence or (T, B, d_in) for a batch.
    Returns (final hidden state, tape). The final state is (H,) or (B, H)
    to match the input batching.
    """
    frames = np.asarray(frames, dtype=np.float64)
    batched = frames.ndim == 3
    if frames.ndim == 2:
        frames = frames[:, None, :]
    elif frames.ndim != 3:
        raise DimensionError(f"frames must be (T, d) or (T, B, d), got {frames.shape}")
    t_len, batch, d_in = frames.shape
    if t_len == 0:
        raise ValueError("empty window")
    if d_in != params.d_in:
        raise DimensionError(f"frame width {d_in} != d_in {params.d_in}")

    hidden = params.hidden
    shape = (t_len, batch, hidden)
    gi, gf, go, gg = np.empty(shape), np.empty(shape), np.empty(shape), np.empty(shape)
    cs, hs = np.empty(shape), np.empty(shape)
    h = np.zeros((batch, hidden))
    c = np.zeros((batch, hidden))
    wt, ut = params.w.T, params.u.T
    for t in range(t_len):
        a = frames[t] @ wt + h @ ut + params.b
        i, f, o, g_pre = _split_gates(a, hidden)
        i, f, o = sigmoid(i), sigmoid(f), sigmoid(o)
        g = np.tanh(g_pre)
        c = f * c + i * g
        h = o * np.tanh(c)
        gi[t], gf[t], go[t], gg[t] = i, f, o, g
        cs[t], hs[t] = c, h

    tape = LstmTape(x=frames, i=gi, f=gf, o=go, g=gg, c=cs, h=hs, batched=batched)
    return (h if batched else h[0]), tape


def lstm_backward_window(tape: LstmTape, dh, params: LstmParams):
    """Exact gradients of an upstream scalar through the forward window.

    dh is the gradient with respect to the final hidden state, shaped (H,)
    or (B, H); passing (T, H) or (T, B, H) instead supplies a gradient for
    every step's hidden output (used when a second layer consumed the whole
    hidden sequence). Returns {"w", "u", "b", "x"} where "x" matches the
    frame layout given to the forward pass.
    """
    t_len, batch, hidden = tape.h.shape
    if params.hidden != hidden or params.d_in != tape.x.shape[2]:
        raise StateError(
            f"tape built for d_in={tape.x.shape[2]}, H={hidden}; params have "
            f"d_in={params.d_in}, H={params.hidden}"
        )
    dh = np.asarray(dh, dtype=np.float64)
    if not tape.batched and dh.shape == (hidden,):
        dh_steps = None
        dh_final = dh[None, :]
    elif not tape.batched and dh.shape == (t_len, hidden):
        dh_steps = dh[:, None, :]
        dh_final = None
    elif tape.batched and dh.shape == (batch, hidden):
        dh_steps = None
        dh_final = dh
    elif tape.batched and dh.shape == (t_len, batch, hidden):
        dh_steps = dh
        dh_final = None
    else:
        raise DimensionError(f"dh shape {dh.shape} does not match tape {tape.h.shape}")

    dw = np.zeros_like(params.w)
    du = np.zeros_like(params.u)
    db = np.zeros_like(params.b)
    dx = np.empty_like(tape.x)
    dh_rec = np.zeros((batch, hidden))
    dc = np.zeros((batch, hidden))
    for t in range(t_len - 1, -1, -1):
        dh_t = dh_rec
        if dh_steps is not None:
            dh_t = dh_t + dh_steps[t]
        elif t == t_len - 1:
            dh_t = dh_t + dh_final
        i, f, o, g = tape.i[t], tape.f[t], tape.o[t], tape.g[t]
        tanh_c = np.tanh(tape.c[t])
        c_prev = tape.c[t - 1] if t > 0 else np.zeros((batch, hidden))
        h_prev = tape.h[t - 1] if t > 0 else np.zeros((batch, hidden))

        dc = dc + dh_t * o * (1.0 - tanh_c * tanh_c)
        da = np.concatenate(
            [
                dc * g * i * (1.0 - i),
                dc * c_prev * f * (1.0 - f),
                dh_t * tanh_c * o * (1.0 - o),
                dc * i * (1.0 - g * g),
            ],
            axis=-1,
        )
        dw += da.T @ tape.x[t]
        du += da.T @ h_prev
        db += da.sum(axis=0)
        dx[t] = da @ params.w
        dh_rec = da @ params.u
        dc = dc * f

    if not tape.batched:
        dx = dx[:, 0, :]
    return {"w": dw, "u": du, "b": db, "x": dx}


def dropout_mask(shape, rate: float, rng: Rng) -> np.ndarray:
    """Inverted-dropout mask: zeros with probability `rate`, survivors scaled
    by 1/(1-rate). Multiplying by the mask applies dropout."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if rate == 0.0:
        return np.ones(shape)
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def dropout(v, rate: float, rng: Rng, training: bool):
    """Inverted dropout: identity at inference, masked and rescaled in training."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    v = np.asarray(v, dtype=np.float64)
    if not training or rate == 0.0:
        return v
    return v * dropout_mask(v.shape, rate, rng)
