"""Minimal fully-connected network trained from scratch.

ReLU hidden layers, linear output, squared-error loss on the taken action's
output only, Adam with an exponential-staircase learning-rate decay, leading
layers freezable for transfer runs.  Everything is float64 and seeded, so
training trajectories are reproducible bit for bit.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"BGMLP\x00"
FORMAT_VERSION = 1


class ShapeError(ValueError):
    """Input dimensions do not match the network."""


class WeightFormatError(ValueError):
    """Corrupt, truncated, or incompatible weight stream."""


@dataclass(frozen=True)
class AdamConfig:
    base_lr: float = 0.00025
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    decay_rate: float = 0.98
    decay_stair: int = 10_000  # train steps per decay notch

    def __post_init__(self):
        if self.base_lr <= 0:
            raise ValueError("base_lr must be > 0")

    def lr_at(self, step: int) -> float:
        """Learning rate used for the train step with 0-based index `step`."""
        return self.base_lr * self.decay_rate ** (step // self.decay_stair)


class MLP:
    """Weights, biases, Adam moments, and a count of frozen leading layers."""

    def __init__(self, layer_sizes, seed=0, frozen_layers=0):
        layer_sizes = tuple(int(s) for s in layer_sizes)
        if len(layer_sizes) < 2:
            raise ShapeError("need at least input and output widths")
        if not 0 <= frozen_layers <= len(layer_sizes) - 1:
            raise ValueError("frozen_layers out of range")
        self.layer_sizes = layer_sizes
        self.frozen_layers = int(frozen_layers)
        self.step = 0
        rng = np.random.default_rng(seed)
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(layer_sizes, layer_sizes[1:]):
            # He-style uniform fan-in init for the ReLU stack; zero biases
            limit = np.sqrt(6.0 / fan_in)
            self.weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))
        self.m_w = [np.zeros_like(w) for w in self.weights]
        self.v_w = [np.zeros_like(w) for w in self.weights]
        self.m_b = [np.zeros_like(b) for b in self.biases]
        self.v_b = [np.zeros_like(b) for b in self.biases]

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def clone(self) -> "MLP":
        """Deep copy (used for the target-network snapshot)."""
        other = MLP.__new__(MLP)
        other.layer_sizes = self.layer_sizes
        other.frozen_layers = self.frozen_layers
        other.step = self.step
        for name in ("weights", "biases", "m_w", "v_w", "m_b", "v_b"):
            setattr(other, name, [a.copy() for a in getattr(self, name)])
        return other

    def copy_weights_from(self, other: "MLP"):
        if other.layer_sizes != self.layer_sizes:
            raise ShapeError("cannot sync networks of different shape")
        for i in range(self.num_layers):
            self.weights[i][...] = other.weights[i]
            self.biases[i][...] = other.biases[i]

    # -- forward / backward ---------------------------------------------------

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        h = x[None, :] if single else x
        if h.shape[1] != self.layer_sizes[0]:
            raise ShapeError(f"expected input width {self.layer_sizes[0]}, got {h.shape[1]}")
        for i in range(self.num_layers - 1):
            h = np.maximum(h @ self.weights[i] + self.biases[i], 0.0)
        h = h @ self.weights[-1] + self.biases[-1]
        return h[0] if single else h

    def __call__(self, x):
        return self.forward(x)

    def gradients(self, batch_x, batch_target_q, batch_action):
        """Backprop gradients of the mean squared error on the taken actions.

        Returns (loss, per-layer weight grads, per-layer bias grads).
        """
        x = np.asarray(batch_x, dtype=np.float64)
        y = np.asarray(batch_target_q, dtype=np.float64)
        a = np.asarray(batch_action)
        b = x.shape[0]
        if b < 1:
            raise ValueError("empty batch")

        acts = [x]
        h = x
        for i in range(self.num_layers - 1):
            h = np.maximum(h @ self.weights[i] + self.biases[i], 0.0)
            acts.append(h)
        q = h @ self.weights[-1] + self.biases[-1]

        rows = np.arange(b)
        err = q[rows, a] - y
        loss = float(np.mean(err**2))

        # gradients flow only through the taken action's output unit
        d_out = np.zeros_like(q)
        d_out[rows, a] = 2.0 * err / b

        grads_w = [None] * self.num_layers
        grads_b = [None] * self.num_layers
        d = d_out
        for i in range(self.num_layers - 1, -1, -1):
            grads_w[i] = acts[i].T @ d
            grads_b[i] = d.sum(axis=0)
            if i > 0:
                d = d @ self.weights[i].T
                d[acts[i] <= 0.0] = 0.0  # ReLU mask
        return loss, grads_w, grads_b

    def train_step(self, batch_x, batch_target_q, batch_action, adam: AdamConfig) -> float:
        """One squared-error Adam step on the taken actions' outputs.

        Returns the batch loss.  Raises on a non-finite loss so a divergent
        run halts instead of silently producing garbage.
        """
        loss, grads_w, grads_b = self.gradients(batch_x, batch_target_q, batch_action)
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite loss at step {self.step}")

        lr = adam.lr_at(self.step)
        t = self.step + 1
        bc1 = 1.0 - adam.beta1**t
        bc2 = 1.0 - adam.beta2**t
        for i in range(self.frozen_layers, self.num_layers):
            for grad, theta, m, v in (
                (grads_w[i], self.weights[i], self.m_w[i], self.v_w[i]),
                (grads_b[i], self.biases[i], self.m_b[i], self.v_b[i]),
            ):
                m *= adam.beta1
                m += (1.0 - adam.beta1) * grad
                v *= adam.beta2
                v += (1.0 - adam.beta2) * grad**2
                theta -= lr * (m / bc1) / (np.sqrt(v / bc2) + adam.epsilon)
        self.step += 1
        return loss


# ---------------------------------------------------------------------------
# serialization: little-endian binary, layout documented field by field


def to_bytes(net: MLP) -> bytes:
    """Binary weight stream.

    Layout (little-endian): magic, u32 version, u32 layer count L+1, u32 sizes,
    u32 frozen layers, u64 step counter, then for each layer the float64
    row-major weights and biases, then the four Adam moment blocks in the same
    order.
    """
    parts = [MAGIC, struct.pack("<I", FORMAT_VERSION)]
    parts.append(struct.pack("<I", len(net.layer_sizes)))
    parts.append(struct.pack(f"<{len(net.layer_sizes)}I", *net.layer_sizes))
    parts.append(struct.pack("<I", net.frozen_layers))
    parts.append(struct.pack("<Q", net.step))
    for group in (net.weights, net.biases, net.m_w, net.m_b, net.v_w, net.v_b):
        for arr in group:
            parts.append(arr.astype("<f8", copy=False).tobytes(order="C"))
    return b"".join(parts)


def from_bytes(data: bytes) -> MLP:
    if data[: len(MAGIC)] != MAGIC:
        raise WeightFormatError("bad magic bytes")
    off = len(MAGIC)

    def take(fmt):
        nonlocal off
        size = struct.calcsize(fmt)
        if off + size > len(data):
            raise WeightFormatError("truncated stream")
        vals = struct.unpack_from(fmt, data, off)
        off += size
        return vals

    (version,) = take("<I")
    if version != FORMAT_VERSION:
        raise WeightFormatError(f"unsupported version {version}")
    (n_sizes,) = take("<I")
    if not 2 <= n_sizes <= 64:
        raise WeightFormatError("implausible layer count")
    sizes = take(f"<{n_sizes}I")
    (frozen,) = take("<I")
    (step,) = take("<Q")

    net = MLP(sizes, seed=0, frozen_layers=frozen)
    net.step = int(step)
    for group in (net.weights, net.biases, net.m_w, net.m_b, net.v_w, net.v_b):
        for arr in group:
            size = arr.size * 8
            if off + size > len(data):
                raise WeightFormatError("payload shorter than declared layer sizes")
            arr[...] = np.frombuffer(data, dtype="<f8", count=arr.size, offset=off).reshape(arr.shape)
            off += size
    if off != len(data):
        raise WeightFormatError("trailing bytes after payload")
    return net


def save_weights(net: MLP, path):
    with open(path, "wb") as fh:
        fh.write(to_bytes(net))


def load_weights(path) -> MLP:
    with open(path, "rb") as fh:
        return from_bytes(fh.read())
