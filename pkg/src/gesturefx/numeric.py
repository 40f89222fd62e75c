"""Dense float64 numeric primitives: seeded RNG, initializers, activations,
cross-entropy, and the Adam optimizer.

Matrices are plain 2-D float64 numpy arrays in row-major (C) order. Every
operation here is deterministic given its inputs; randomness enters only
through an explicit `Rng`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError

__all__ = [
    "Rng",
    "AdamState",
    "adam_step",
    "matmul",
    "softmax",
    "log_softmax",
    "cross_entropy",
    "xavier_init",
    "sigmoid",
    "relu",
    "CROSS_ENTROPY_CLAMP",
]

CROSS_ENTROPY_CLAMP = 1e-12


class Rng:
    """Deterministic random stream with labeled child streams.

    The same seed always yields the same draw sequence. `split(label)`
    derives an independent child stream from (seed, label) only, so child
    streams do not depend on how much of the parent has been consumed.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def split(self, label: str) -> "Rng":
        digest = hashlib.sha256(f"{self.seed}/{label}".encode()).digest()
        return Rng(int.from_bytes(digest[:8], "little"))

    def random(self, size=None):
        return self._gen.random(size)

    def uniform(self, low: float, high: float, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size)

    def permutation(self, n: int):
        return self._gen.permutation(n)

    def __repr__(self):
        return f"Rng(seed={self.seed})"


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of two 2-D float64 arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(f"matmul expects 2-D arrays, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul shape mismatch: {a.shape} x {b.shape}")
    return a @ b


def sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign so exp never overflows.
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def softmax(v: np.ndarray) -> np.ndarray:
    """Shift-stable softmax over the last axis."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("softmax of empty input")
    shifted = v - v.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("log_softmax of empty input")
    shifted = v - v.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def cross_entropy(p: np.ndarray, label: int) -> float:
    """-ln p[label], with p[label] clamped at CROSS_ENTROPY_CLAMP."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1:
        raise DimensionError(f"cross_entropy expects a vector, got shape {p.shape}")
    label = int(label)
    if not 0 <= label < p.shape[0]:
        raise ValueError(f"label {label} out of range for {p.shape[0]} classes")
    return float(-np.log(max(p[label], CROSS_ENTROPY_CLAMP)))


def xavier_init(rows: int, cols: int, rng: Rng) -> np.ndarray:
    """Uniform Xavier/Glorot init: entries in +-sqrt(6/(rows+cols))."""
    if rows < 1 or cols < 1:
        raise ValueError(f"xavier_init needs positive dims, got {rows}x{cols}")
    limit = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-limit, limit, (rows, cols))


@dataclass
class AdamState:
    """Adam moments for a named set of parameter arrays."""

    alpha: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)


def adam_step(params: dict, grads: dict, state: AdamState) -> dict:
    """One bias-corrected Adam update, applied to `params` in place.

    `params` and `grads` map names to same-shaped float64 arrays. Moments are
    lazily allocated on first sight of each name.
    """
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    b1c = 1.0 - b1**state.t
    b2c = 1.0 - b2**state.t
    for name, p in params.items():
        g = grads[name]
        if np.shape(g) != np.shape(p):
            raise DimensionError(
                f"adam_step: gradient shape {np.shape(g)} != parameter shape "
                f"{np.shape(p)} for '{name}'"
            )
        if name not in state.m:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * np.square(g)
        p -= state.alpha * (m / b1c) / (np.sqrt(v / b2c) + state.eps)
    return params
