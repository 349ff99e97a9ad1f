"""Minimal neural-network core shared by the decoder and the agent."""

from rlihf_bench.nn.mlp import MLP, ForwardCache, mlp_forward, mlp_backward
from rlihf_bench.nn.adam import Adam, AdamState, adam_step

__all__ = [
    "MLP",
    "ForwardCache",
    "mlp_forward",
    "mlp_backward",
    "Adam",
    "AdamState",
    "adam_step",
]
