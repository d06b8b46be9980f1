"""Dense feed-forward network with hand-written forward/backward passes.

The attribute extraction network is input -> hidden (ELU) -> output
(sigmoid); sigmoid keeps every output a valid soft truth in (0, 1).
Everything is float64: the training signal is a difference of two nearly
equal energies, which single precision would wash out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ACTIVATIONS = ("identity", "elu", "sigmoid")


def _activate(z: np.ndarray, tag: str) -> np.ndarray:
    if tag == "identity":
        return z
    if tag == "elu":
        return np.where(z > 0.0, z, np.expm1(z))
    if tag == "sigmoid":
        out = np.empty_like(z)
        pos = z >= 0.0
        out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
        ez = np.exp(z[~pos])
        out[~pos] = ez / (1.0 + ez)
        return out
    raise ValueError(f"unknown activation {tag!r}")


def _activate_deriv(z: np.ndarray, tag: str) -> np.ndarray:
    if tag == "identity":
        return np.ones_like(z)
    if tag == "elu":
        return np.where(z > 0.0, 1.0, np.exp(z))
    if tag == "sigmoid":
        s = _activate(z, "sigmoid")
        return s * (1.0 - s)
    raise ValueError(f"unknown activation {tag!r}")


@dataclass(eq=False)
class MlpParams:
    """Per-layer weight matrices (out x in), bias vectors, activation tags."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activations: list[str]

    def __post_init__(self):
        if not (len(self.weights) == len(self.biases) == len(self.activations)):
            raise ValueError("weights, biases, and activations must align")
        for l, (w, b, act) in enumerate(zip(self.weights, self.biases, self.activations)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
                raise ValueError(f"layer {l}: weight {w.shape} / bias {b.shape} mismatch")
            if l > 0 and w.shape[1] != self.weights[l - 1].shape[0]:
                raise ValueError(f"layer {l}: input dim {w.shape[1]} does not chain")
            if act not in ACTIVATIONS:
                raise ValueError(f"layer {l}: unknown activation {act!r}")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ValueError(f"layer {l}: non-finite parameters")

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.weights[-1].shape[0]

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights],
                         [b.copy() for b in self.biases],
                         list(self.activations))

    def flatten(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b)
        return np.concatenate(parts)


@dataclass(eq=False)
class MlpGrads:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def add_(self, other: "MlpGrads") -> "MlpGrads":
        for a, b in zip(self.weights, other.weights):
            a += b
        for a, b in zip(self.biases, other.biases):
            a += b
        return self


def init_mlp(dims: list[int], seed: int, activations: list[str] | None = None) -> MlpParams:
    """Uniform +-sqrt(6/(fan_in+fan_out)) weights, zero biases; deterministic in seed."""
    if len(dims) < 2:
        raise ValueError("need at least input and output dims")
    if activations is None:
        activations = ["elu"] * (len(dims) - 2) + ["sigmoid"]
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights=weights, biases=biases, activations=list(activations))


@dataclass(eq=False)
class ForwardCache:
    inputs: list[np.ndarray]       # layer inputs, 2-D (batch, fan_in)
    preacts: list[np.ndarray]      # pre-activations, 2-D (batch, fan_out)
    squeeze: bool                  # original input was a single vector


def forward(params: MlpParams, u: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    """Evaluate the network; accepts one feature vector or a batch of rows."""
    u = np.asarray(u, dtype=np.float64)
    squeeze = u.ndim == 1
    a = u[None, :] if squeeze else u
    if a.shape[1] != params.input_dim:
        raise ValueError(f"input dim {a.shape[1]}, network expects {params.input_dim}")
    inputs, preacts = [], []
    for w, b, act in zip(params.weights, params.biases, params.activations):
        inputs.append(a)
        z = a @ w.T + b
        preacts.append(z)
        a = _activate(z, act)
    if not np.isfinite(a).all():
        raise ValueError("non-finite network output")
    out = a[0] if squeeze else a
    return out, ForwardCache(inputs=inputs, preacts=preacts, squeeze=squeeze)


def backward_from_preact(params: MlpParams, cache: ForwardCache,
                         delta_last: np.ndarray) -> MlpGrads:
    """Reverse pass given dLoss/d(pre-activation) of the last layer."""
    delta = delta_last[None, :] if cache.squeeze else delta_last
    grads_w = [None] * params.n_layers
    grads_b = [None] * params.n_layers
    for l in range(params.n_layers - 1, -1, -1):
        grads_w[l] = delta.T @ cache.inputs[l]
        grads_b[l] = delta.sum(axis=0)
        if l > 0:
            da = delta @ params.weights[l]
            delta = da * _activate_deriv(cache.preacts[l - 1], params.activations[l - 1])
    return MlpGrads(weights=grads_w, biases=grads_b)


def backward(params: MlpParams, cache: ForwardCache, grad_out: np.ndarray) -> MlpGrads:
    """Reverse pass from dLoss/d(output); sums over batch rows."""
    grad_out = np.asarray(grad_out, dtype=np.float64)
    g = grad_out[None, :] if cache.squeeze else grad_out
    delta = g * _activate_deriv(cache.preacts[-1], params.activations[-1])
    # backward_from_preact re-wraps when squeeze is set
    return backward_from_preact(params, cache, delta[0] if cache.squeeze else delta)


def zeros_like_grads(params: MlpParams) -> MlpGrads:
    return MlpGrads([np.zeros_like(w) for w in params.weights],
                    [np.zeros_like(b) for b in params.biases])
