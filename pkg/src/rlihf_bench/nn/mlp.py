"""Multilayer perceptron with explicit reverse-mode gradients."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from rlihf_bench.errors import NetworkError

ACTIVATIONS = ("relu", "tanh", "linear")


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "tanh":
        return np.tanh(z)
    return z


def _activation_grad(z: np.ndarray, out: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return (z > 0).astype(z.dtype)
    if kind == "tanh":
        return 1.0 - out ** 2
    return np.ones_like(z)


@dataclass
class ForwardCache:
    """Intermediates kept by forward() for backward()."""
    layer_inputs: list[np.ndarray] = field(default_factory=list)
    pre_activations: list[np.ndarray] = field(default_factory=list)
    outputs: list[np.ndarray] = field(default_factory=list)
    squeezed: bool = False


@dataclass
class MLP:
    """Stack of affine layers; weights are stored (in, out)."""
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    hidden_activation: str = "relu"
    output_activation: str = "linear"

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise NetworkError("need one bias per weight matrix and at least one layer")
        for kind in (self.hidden_activation, self.output_activation):
            if kind not in ACTIVATIONS:
                raise NetworkError(f"unknown activation {kind!r}")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise NetworkError(f"layer {i}: weight {w.shape} and bias {b.shape} disagree")
            if i > 0 and w.shape[0] != self.weights[i - 1].shape[1]:
                raise NetworkError(
                    f"layer {i} expects {w.shape[0]} inputs, previous layer gives "
                    f"{self.weights[i - 1].shape[1]}"
                )

    @classmethod
    def build(
        cls,
        sizes: list[int],
        rng: np.random.Generator,
        hidden_activation: str = "relu",
        output_activation: str = "linear",
        output_scale: float = 1.0,
    ) -> "MLP":
        """Xavier-uniform weights, zero biases.

        Args:
            sizes: Layer widths including input and output
            rng: Random source
            hidden_activation: Activation after every hidden layer
            output_activation: Activation after the last layer
            output_scale: Multiplier on the last layer's initial weights
        """
        if len(sizes) < 2:
            raise NetworkError(f"need at least input and output sizes, got {sizes}")
        weights, biases = [], []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        weights[-1] *= output_scale
        return cls(weights, biases, hidden_activation, output_activation)

    @property
    def sizes(self) -> list[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def in_features(self) -> int:
        return self.weights[0].shape[0]

    @property
    def out_features(self) -> int:
        return self.weights[-1].shape[1]

    @property
    def parameter_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def parameters(self) -> list[np.ndarray]:
        """Parameter arrays in (W0, b0, W1, b1, ...) order; views, not copies."""
        params = []
        for w, b in zip(self.weights, self.biases):
            params.extend([w, b])
        return params

    def _activation(self, layer: int) -> str:
        if layer == len(self.weights) - 1:
            return self.output_activation
        return self.hidden_activation

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
        """Evaluate the network and keep intermediates.

        Args:
            x: (N, in) batch or a single (in,) vector

        Returns:
            Output with the same leading shape, and the cache
        """
        x = np.asarray(x, dtype=float)
        squeezed = x.ndim == 1
        h = x[None, :] if squeezed else x
        if h.shape[1] != self.in_features:
            raise NetworkError(f"input has {h.shape[1]} features, network expects {self.in_features}")

        cache = ForwardCache(squeezed=squeezed)
        for layer, (w, b) in enumerate(zip(self.weights, self.biases)):
            cache.layer_inputs.append(h)
            z = h @ w + b
            h = _activate(z, self._activation(layer))
            cache.pre_activations.append(z)
            cache.outputs.append(h)
        return (h[0] if squeezed else h), cache

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(
        self,
        cache: Optional[ForwardCache],
        grad_output: np.ndarray,
    ) -> tuple[list[np.ndarray], np.ndarray]:
        """Reverse-mode gradients of a scalar loss.

        Args:
            cache: Cache returned by the matching forward() call
            grad_output: dLoss/dOutput, same shape as the forward output

        Returns:
            Parameter gradients in parameters() order, and dLoss/dInput
        """
        if cache is None or not cache.layer_inputs:
            raise NetworkError("backward() needs the cache from a forward() call")
        g = np.asarray(grad_output, dtype=float)
        if cache.squeezed:
            g = g[None, :]
        if g.shape != cache.outputs[-1].shape:
            raise NetworkError(f"output gradient shape {g.shape} != output shape {cache.outputs[-1].shape}")

        grads: list[np.ndarray] = []
        for layer in reversed(range(len(self.weights))):
            g = g * _activation_grad(cache.pre_activations[layer], cache.outputs[layer], self._activation(layer))
            grads.append(g.sum(axis=0))
            grads.append(cache.layer_inputs[layer].T @ g)
            g = g @ self.weights[layer].T
        grads.reverse()
        return grads, (g[0] if cache.squeezed else g)

    def copy(self) -> "MLP":
        return MLP(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.hidden_activation,
            self.output_activation,
        )

    def soft_update(self, source: "MLP", tau: float) -> None:
        """Polyak averaging toward source: θ' ← τθ + (1 − τ)θ'."""
        for target, online in zip(self.parameters(), source.parameters()):
            if target.shape != online.shape:
                raise NetworkError("soft_update between networks of different shapes")
            target *= 1.0 - tau
            target += tau * online


def mlp_forward(net: MLP, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    """Functional alias of MLP.forward."""
    return net.forward(x)


def mlp_backward(
    net: MLP,
    cache: Optional[ForwardCache],
    grad_output: np.ndarray,
) -> list[np.ndarray]:
    """Parameter gradients only; see MLP.backward."""
    return net.backward(cache, grad_output)[0]
