"""Cyclic experience replay."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from rlihf_bench.errors import AgentError, BufferUnderfilledError


@dataclass(frozen=True)
class Transition:
    """One (s, a, r, s', done) tuple."""
    obs: np.ndarray
    action: np.ndarray
    reward: float
    next_obs: np.ndarray
    done: bool


@dataclass(frozen=True)
class Batch:
    """Column-stacked sample of transitions."""
    obs: np.ndarray                 # (N, obs_dim)
    actions: np.ndarray             # (N, act_dim)
    rewards: np.ndarray             # (N,)
    next_obs: np.ndarray            # (N, obs_dim)
    dones: np.ndarray               # (N,) 0.0 / 1.0
    indices: np.ndarray

    def __len__(self) -> int:
        return len(self.rewards)


class ReplayBuffer:
    """Fixed-capacity FIFO store with uniform sampling."""

    def __init__(
        self,
        obs_dim: int,
        act_dim: int,
        capacity: int = 100_000,
        rng: Optional[np.random.Generator] = None,
    ):
        if capacity < 1:
            raise AgentError("replay capacity must be >= 1")
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.capacity = capacity
        self.rng = rng if rng is not None else np.random.default_rng()

        self.obs = np.zeros((capacity, obs_dim))
        self.next_obs = np.zeros((capacity, obs_dim))
        self.actions = np.zeros((capacity, act_dim))
        self.rewards = np.zeros(capacity)
        self.dones = np.zeros(capacity)

        self.ptr = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def add(self, transition: Transition) -> None:
        """Store a transition, overwriting the oldest when full."""
        obs = np.asarray(transition.obs, dtype=float)
        next_obs = np.asarray(transition.next_obs, dtype=float)
        action = np.asarray(transition.action, dtype=float)
        if obs.shape != (self.obs_dim,) or next_obs.shape != (self.obs_dim,):
            raise AgentError(f"observation shape {obs.shape} != ({self.obs_dim},)")
        if action.shape != (self.act_dim,):
            raise AgentError(f"action shape {action.shape} != ({self.act_dim},)")

        self.obs[self.ptr] = obs
        self.next_obs[self.ptr] = next_obs
        self.actions[self.ptr] = action
        self.rewards[self.ptr] = transition.reward
        self.dones[self.ptr] = float(transition.done)

        self.ptr = (self.ptr + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample_indices(self, batch_size: int) -> np.ndarray:
        if self.size < batch_size:
            raise BufferUnderfilledError(f"buffer holds {self.size} < batch size {batch_size}")
        return self.rng.integers(0, self.size, size=batch_size)

    def sample(self, batch_size: int) -> Batch:
        """Uniform sample with replacement.

        Raises:
            BufferUnderfilledError: When fewer than batch_size transitions are stored
        """
        idx = self.sample_indices(batch_size)
        return Batch(
            obs=self.obs[idx],
            actions=self.actions[idx],
            rewards=self.rewards[idx],
            next_obs=self.next_obs[idx],
            dones=self.dones[idx],
            indices=idx,
        )
