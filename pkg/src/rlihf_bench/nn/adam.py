"""Adam optimizer over lists of numpy arrays."""

from dataclasses import dataclass, field

import numpy as np

from rlihf_bench.errors import NetworkError


@dataclass
class AdamState:
    """First/second moment estimates and step count."""
    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)
    t: int = 0

    @classmethod
    def zeros_like(cls, params: list[np.ndarray]) -> "AdamState":
        return cls(
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
        )


def adam_step(
    params: list[np.ndarray],
    grads: list[np.ndarray],
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> list[np.ndarray]:
    """Bias-corrected Adam update, applied in place.

    Args:
        params: Parameter arrays (updated in place)
        grads: Gradients matching params
        state: Moment estimates (updated in place)
        lr: Learning rate

    Returns:
        The updated params
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise NetworkError("params, grads and optimizer state disagree in length")
    state.t += 1
    correction1 = 1.0 - beta1 ** state.t
    correction2 = 1.0 - beta2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        p -= lr * (m / correction1) / (np.sqrt(v / correction2) + eps)
    return params


class Adam:
    """Stateful optimizer bound to a fixed parameter list."""

    def __init__(self, params: list[np.ndarray], lr: float = 3e-4):
        self.params = params
        self.lr = lr
        self.state = AdamState.zeros_like(params)

    def step(self, grads: list[np.ndarray]) -> None:
        adam_step(self.params, grads, self.state, self.lr)
