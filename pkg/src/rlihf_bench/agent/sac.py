"""Soft Actor-Critic on the numpy network core."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rlihf_bench.agent.replay import Batch, ReplayBuffer
from rlihf_bench.errors import AgentError, ConfigError
from rlihf_bench.nn.adam import Adam
from rlihf_bench.nn.mlp import MLP, ForwardCache

logger = logging.getLogger(__name__)

LOG_STD_MIN = -5.0
LOG_STD_MAX = 2.0
SQUASH_EPS = 1e-6
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SACConfig:
    """SAC hyperparameters."""
    gamma: float = 0.99
    tau: float = 0.005
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    alpha_lr: float = 3e-4
    batch_size: int = 256
    alpha: float = 0.2
    auto_alpha: bool = False
    target_entropy: Optional[float] = None     # −|A| when None
    start_steps: int = 1000
    update_every: int = 1
    hidden: tuple[int, ...] = (64, 64)
    buffer_capacity: int = 100_000
    log_every: int = 1000

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError(f"sac.gamma {self.gamma} outside [0, 1)")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"sac.tau {self.tau} outside [0, 1]")
        if self.batch_size < 1:
            raise ConfigError("sac.batch_size must be >= 1")
        if min(self.actor_lr, self.critic_lr, self.alpha_lr) <= 0:
            raise ConfigError("sac learning rates must be > 0")
        if self.alpha < 0:
            raise ConfigError("sac.alpha must be >= 0")
        if self.update_every < 1 or self.start_steps < 0:
            raise ConfigError("sac.update_every must be >= 1 and sac.start_steps >= 0")
        if not self.hidden or min(self.hidden) < 1:
            raise ConfigError("sac.hidden needs at least one positive width")


@dataclass
class Actor:
    """Squashed-Gaussian policy; the trunk emits (mean, log_std) per action dim."""
    trunk: MLP
    act_dim: int

    @classmethod
    def build(cls, obs_dim: int, act_dim: int, hidden: tuple[int, ...], rng: np.random.Generator) -> "Actor":
        trunk = MLP.build([obs_dim, *hidden, 2 * act_dim], rng, hidden_activation="relu", output_scale=0.1)
        return cls(trunk=trunk, act_dim=act_dim)

    def distribution(self, obs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, ForwardCache]:
        """(mean, clamped log_std, in-range mask, cache) for an (N, obs) batch."""
        out, cache = self.trunk.forward(np.atleast_2d(obs))
        mean = out[:, :self.act_dim]
        raw = out[:, self.act_dim:]
        log_std = np.clip(raw, LOG_STD_MIN, LOG_STD_MAX)
        in_range = (raw >= LOG_STD_MIN) & (raw <= LOG_STD_MAX)
        return mean, log_std, in_range, cache

    def copy(self) -> "Actor":
        return Actor(trunk=self.trunk.copy(), act_dim=self.act_dim)


@dataclass
class PolicySample:
    """Reparameterized draw u = mean + std·eps, a = tanh(u)."""
    action: np.ndarray
    log_prob: np.ndarray
    eps: np.ndarray
    mean: np.ndarray
    log_std: np.ndarray
    in_range: np.ndarray
    cache: ForwardCache


def squashed_log_prob(eps: np.ndarray, log_std: np.ndarray, action: np.ndarray) -> np.ndarray:
    """Gaussian log-density of u minus the tanh change-of-variables term."""
    gaussian = np.sum(-0.5 * eps ** 2 - log_std - _HALF_LOG_2PI, axis=-1)
    return gaussian - np.sum(np.log(1.0 - action ** 2 + SQUASH_EPS), axis=-1)


def reparameterize(actor: Actor, obs: np.ndarray, eps: np.ndarray) -> PolicySample:
    mean, log_std, in_range, cache = actor.distribution(obs)
    action = np.tanh(mean + np.exp(log_std) * eps)
    return PolicySample(
        action=action,
        log_prob=squashed_log_prob(eps, log_std, action),
        eps=eps,
        mean=mean,
        log_std=log_std,
        in_range=in_range,
        cache=cache,
    )


def sample_action(
    actor: Actor,
    obs: np.ndarray,
    rng: np.random.Generator,
    deterministic: bool = False,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Draw an action in (−1, 1)^|A|.

    Args:
        actor: Policy
        obs: (obs,) or (N, obs)
        rng: Noise source (unused when deterministic)
        deterministic: Return tanh(mean) and no log-probability

    Returns:
        (action, log_prob) with leading shape following obs
    """
    single = np.ndim(obs) == 1
    if deterministic:
        mean, _, _, _ = actor.distribution(obs)
        action = np.tanh(mean)
        return (action[0] if single else action), None
    batch = np.atleast_2d(obs).shape[0]
    sample = reparameterize(actor, obs, rng.standard_normal((batch, actor.act_dim)))
    if single:
        return sample.action[0], sample.log_prob[0]
    return sample.action, sample.log_prob


def q_value(critic: MLP, obs: np.ndarray, actions: np.ndarray) -> np.ndarray:
    return critic.predict(np.concatenate([obs, actions], axis=-1))[:, 0]


def bellman_target(
    rewards: np.ndarray,
    dones: np.ndarray,
    next_q1: np.ndarray,
    next_q2: np.ndarray,
    next_log_prob: np.ndarray,
    gamma: float,
    alpha: float,
) -> np.ndarray:
    """y = r + γ·(1 − done)·(min(Q′₁, Q′₂) − α·log π(a′|s′))."""
    soft_value = np.minimum(next_q1, next_q2) - alpha * next_log_prob
    return rewards + gamma * (1.0 - dones) * soft_value


def critic_target(
    batch: Batch,
    target_q1: MLP,
    target_q2: MLP,
    actor: Actor,
    gamma: float,
    alpha: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Soft Bellman targets with a′ drawn from the current actor."""
    next_actions, next_log_prob = sample_action(actor, batch.next_obs, rng)
    return bellman_target(
        batch.rewards,
        batch.dones,
        q_value(target_q1, batch.next_obs, next_actions),
        q_value(target_q2, batch.next_obs, next_actions),
        next_log_prob,
        gamma,
        alpha,
    )


def critic_loss_and_grads(
    critic: MLP,
    obs: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
) -> tuple[float, list[np.ndarray]]:
    """Mean squared error to the targets."""
    q, cache = critic.forward(np.concatenate([obs, actions], axis=-1))
    residual = q[:, 0] - targets
    grads, _ = critic.backward(cache, (2.0 * residual / len(targets))[:, None])
    return float(np.mean(residual ** 2)), grads


def actor_loss_and_grads(
    actor: Actor,
    q1: MLP,
    q2: MLP,
    obs: np.ndarray,
    eps: np.ndarray,
    alpha: float,
) -> tuple[float, list[np.ndarray], np.ndarray]:
    """mean(α·log π(a|s) − min(Q₁, Q₂)(s, a)) for fixed reparameterization noise.

    Returns:
        (loss, trunk gradients, log_prob per sample)
    """
    sample = reparameterize(actor, obs, eps)
    a = sample.action
    n = len(obs)
    inputs = np.concatenate([obs, a], axis=-1)
    q1_out, q1_cache = q1.forward(inputs)
    q2_out, q2_cache = q2.forward(inputs)
    use_first = q1_out[:, 0] <= q2_out[:, 0]
    q_min = np.where(use_first, q1_out[:, 0], q2_out[:, 0])
    loss = float(np.mean(alpha * sample.log_prob - q_min))

    # dQmin/da through whichever critic was smaller
    _, grad_in1 = q1.backward(q1_cache, use_first[:, None].astype(float))
    _, grad_in2 = q2.backward(q2_cache, (~use_first)[:, None].astype(float))
    dq_da = (grad_in1 + grad_in2)[:, obs.shape[1]:]

    one_minus_a2 = 1.0 - a ** 2
    std = np.exp(sample.log_std)
    grad_u = (-dq_da * one_minus_a2 + alpha * 2.0 * a * one_minus_a2 / (one_minus_a2 + SQUASH_EPS)) / n
    grad_mean = grad_u
    grad_log_std = (grad_u * std * eps - alpha / n) * sample.in_range
    grads, _ = actor.trunk.backward(sample.cache, np.concatenate([grad_mean, grad_log_std], axis=1))
    return loss, grads, sample.log_prob


@dataclass(frozen=True)
class UpdateLosses:
    """Losses of one SAC update."""
    critic: float
    actor: float
    alpha_loss: float
    alpha: float


class SACAgent:
    """Actor, twin critics with targets, optimizers and temperature."""

    def __init__(self, obs_dim: int, act_dim: int, config: SACConfig, rng: np.random.Generator):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.config = config
        self.rng = rng

        critic_sizes = [obs_dim + act_dim, *config.hidden, 1]
        self.actor = Actor.build(obs_dim, act_dim, config.hidden, rng)
        self.q1 = MLP.build(critic_sizes, rng)
        self.q2 = MLP.build(critic_sizes, rng)
        self.q1_target = self.q1.copy()
        self.q2_target = self.q2.copy()

        self.actor_opt = Adam(self.actor.trunk.parameters(), lr=config.actor_lr)
        self.q1_opt = Adam(self.q1.parameters(), lr=config.critic_lr)
        self.q2_opt = Adam(self.q2.parameters(), lr=config.critic_lr)
        self.log_alpha = np.array([math.log(config.alpha) if config.alpha > 0 else LOG_STD_MIN])
        self.alpha_opt = Adam([self.log_alpha], lr=config.alpha_lr)
        self.target_entropy = (
            config.target_entropy if config.target_entropy is not None else -float(act_dim)
        )
        self.updates = 0

    @property
    def alpha(self) -> float:
        if not self.config.auto_alpha:
            return self.config.alpha
        return float(np.exp(self.log_alpha[0]))

    def act(self, obs: np.ndarray, deterministic: bool = False) -> np.ndarray:
        action, _ = sample_action(self.actor, obs, self.rng, deterministic=deterministic)
        return action

    def random_action(self) -> np.ndarray:
        return self.rng.uniform(-1.0, 1.0, size=self.act_dim)

    def update(self, buffer: ReplayBuffer) -> UpdateLosses:
        """One gradient step on critics, actor and (optionally) temperature.

        Raises:
            BufferUnderfilledError: When the buffer holds fewer than batch_size transitions
        """
        cfg = self.config
        batch = buffer.sample(cfg.batch_size)
        alpha = self.alpha

        targets = critic_target(batch, self.q1_target, self.q2_target, self.actor, cfg.gamma, alpha, self.rng)
        loss1, grads1 = critic_loss_and_grads(self.q1, batch.obs, batch.actions, targets)
        loss2, grads2 = critic_loss_and_grads(self.q2, batch.obs, batch.actions, targets)
        self.q1_opt.step(grads1)
        self.q2_opt.step(grads2)

        eps = self.rng.standard_normal((len(batch), self.act_dim))
        actor_loss, actor_grads, log_prob = actor_loss_and_grads(
            self.actor, self.q1, self.q2, batch.obs, eps, alpha
        )
        self.actor_opt.step(actor_grads)

        alpha_loss = 0.0
        if cfg.auto_alpha:
            entropy_gap = log_prob + self.target_entropy
            alpha_loss = float(-np.mean(self.log_alpha[0] * entropy_gap))
            self.alpha_opt.step([np.array([-np.mean(entropy_gap)])])

        self.q1_target.soft_update(self.q1, cfg.tau)
        self.q2_target.soft_update(self.q2, cfg.tau)

        losses = UpdateLosses(
            critic=0.5 * (loss1 + loss2),
            actor=actor_loss,
            alpha_loss=alpha_loss,
            alpha=self.alpha,
        )
        if not all(np.isfinite([losses.critic, losses.actor, losses.alpha_loss])):
            raise AgentError(f"non-finite SAC losses at update {self.updates}: {losses}")
        self.updates += 1
        if cfg.log_every and self.updates % cfg.log_every == 0:
            logger.debug(
                "update %d: critic %.4f actor %.4f alpha %.4f",
                self.updates, losses.critic, losses.actor, losses.alpha,
            )
        return losses


def sac_update(buffer: ReplayBuffer, agent: SACAgent) -> UpdateLosses:
    """Functional alias of SACAgent.update."""
    return agent.update(buffer)
