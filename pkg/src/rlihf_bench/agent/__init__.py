"""Soft Actor-Critic agent, replay buffer and policy checkpoints."""

from rlihf_bench.agent.replay import Transition, Batch, ReplayBuffer
from rlihf_bench.agent.sac import (
    SACConfig,
    Actor,
    PolicySample,
    UpdateLosses,
    SACAgent,
    squashed_log_prob,
    reparameterize,
    sample_action,
    q_value,
    bellman_target,
    critic_target,
    critic_loss_and_grads,
    actor_loss_and_grads,
    sac_update,
)
from rlihf_bench.agent.checkpoint import save_checkpoint, load_checkpoint, encode_actor, decode_actor

__all__ = [
    "Transition",
    "Batch",
    "ReplayBuffer",
    "SACConfig",
    "Actor",
    "PolicySample",
    "UpdateLosses",
    "SACAgent",
    "squashed_log_prob",
    "reparameterize",
    "sample_action",
    "q_value",
    "bellman_target",
    "critic_target",
    "critic_loss_and_grads",
    "actor_loss_and_grads",
    "sac_update",
    "save_checkpoint",
    "load_checkpoint",
    "encode_actor",
    "decode_actor",
]
