"""2D point-robot pick-and-place environment."""

import logging
from dataclasses import replace
from typing import Any, Optional

import gymnasium as gym
import numpy as np
from gymnasium import spaces

from rlihf_bench.env.geometry import project_onto_polyline
from rlihf_bench.env.planner import compute_ideal_path
from rlihf_bench.errors import EnvError, EpisodeDoneError
from rlihf_bench.models.scenario import (
    EnvState,
    IdealPath,
    RewardComponents,
    Scenario,
    StepOutcome,
)

logger = logging.getLogger(__name__)


def observation(scenario: Scenario, state: EnvState) -> np.ndarray:
    """[pos, pick − pos, place − pos, carrying, (center − pos, surface distance) per obstacle]."""
    pos = state.agent_pos
    parts = [
        pos,
        scenario.pick_pos - pos,
        scenario.place_pos - pos,
        [1.0 if state.carrying else 0.0],
    ]
    for o in scenario.obstacles:
        offset = o.center - pos
        parts.append(offset)
        parts.append([float(np.hypot(*offset)) - o.r])
    return np.concatenate([np.asarray(p, dtype=float) for p in parts])


def reset_state(scenario: Scenario, rng: Optional[np.random.Generator] = None) -> tuple[EnvState, np.ndarray]:
    """Fresh episode state at the configured start.

    With start_jitter > 0 the start is drawn uniformly from a box of that
    half-width around the configured start, redrawn while it collides.
    """
    pos = scenario.start_pos.copy()
    if scenario.start_jitter > 0:
        if rng is None:
            raise EnvError("start_jitter needs a random generator")
        for _ in range(100):
            candidate = scenario.clamp(pos + rng.uniform(-scenario.start_jitter, scenario.start_jitter, 2))
            if not scenario.collides(candidate):
                pos = candidate
                break
    state = EnvState(agent_pos=pos)
    return state, observation(scenario, state)


def reward_sparse(outcome: StepOutcome, scenario: Scenario) -> float:
    """Success bonus plus collision penalty."""
    reward = 0.0
    if outcome.success:
        reward += scenario.success_reward
    if outcome.collision:
        reward += scenario.collision_penalty
    return reward


def shaping_term(prev_pos: np.ndarray, pos: np.ndarray, ideal: IdealPath, scenario: Scenario) -> float:
    """k_p·Δprogress − k_d·deviation."""
    dist, arc = project_onto_polyline(np.stack([prev_pos, pos]), ideal.waypoints)
    return float(scenario.k_p * (arc[1] - arc[0]) - scenario.k_d * dist[1])


def reward_dense(outcome: StepOutcome, ideal: IdealPath, scenario: Scenario) -> float:
    """Sparse reward plus potential-based path shaping."""
    return reward_sparse(outcome, scenario) + shaping_term(
        outcome.prev_pos, outcome.state.agent_pos, ideal, scenario
    )


def reward_unified_eval(outcome: StepOutcome, ideal: IdealPath, scenario: Scenario) -> float:
    """Evaluation reward shared by every condition; same formula as the dense reward."""
    return reward_dense(outcome, ideal, scenario)


def step_state(
    scenario: Scenario,
    ideal: IdealPath,
    state: EnvState,
    action: np.ndarray,
) -> StepOutcome:
    """Advance one step from state (state is not mutated).

    Raises:
        EpisodeDoneError: When the episode already ended
        EnvError: On a malformed or non-finite action
    """
    if state.done:
        raise EpisodeDoneError(f"episode ended at step {state.step}")
    action = np.asarray(action, dtype=float).reshape(-1)
    if action.shape != (2,) or not np.all(np.isfinite(action)):
        raise EnvError(f"action must be 2 finite values, got {action}")

    prev_pos = state.agent_pos.copy()
    candidate = scenario.clamp(prev_pos + scenario.max_speed * np.clip(action, -1.0, 1.0))
    collision = scenario.collides(candidate)
    pos = prev_pos.copy() if collision else candidate

    new_state = state.copy()
    new_state.agent_pos = pos
    new_state.step += 1
    new_state.collided_this_step = collision

    picked = False
    if not new_state.carrying and np.linalg.norm(pos - scenario.pick_pos) <= scenario.reach_eps:
        new_state.carrying = True
        picked = True
    success = bool(new_state.carrying and np.linalg.norm(pos - scenario.place_pos) <= scenario.reach_eps)
    truncated = not success and new_state.step >= scenario.max_steps
    new_state.success = success
    new_state.done = success or truncated

    dist, _ = project_onto_polyline(pos, ideal.waypoints)
    draft = StepOutcome(
        observation=observation(scenario, new_state),
        state=new_state,
        prev_pos=prev_pos,
        rewards=RewardComponents(sparse=0.0, dense_shaping=0.0),
        done=new_state.done,
        collision=collision,
        picked=picked,
        success=success,
        truncated=truncated,
        deviation=float(dist[0]),
        clearance=scenario.clearance(pos),
    )
    rewards = RewardComponents(
        sparse=reward_sparse(draft, scenario),
        dense_shaping=shaping_term(prev_pos, pos, ideal, scenario),
    )
    return replace(draft, rewards=rewards)


class PickPlaceEnv(gym.Env):
    """Gymnasium wrapper around the point-robot task.

    step() reports the unified (dense) reward; the full StepOutcome is in
    info["outcome"] so callers can pick the reward of their condition.
    """

    metadata = {"render_modes": []}

    def __init__(self, scenario: Optional[Scenario] = None, ideal: Optional[IdealPath] = None):
        super().__init__()
        self.scenario = scenario or Scenario()
        self.ideal = ideal if ideal is not None else compute_ideal_path(self.scenario)
        self.action_space = spaces.Box(low=-1.0, high=1.0, shape=(2,), dtype=np.float32)
        self.observation_space = spaces.Box(
            low=-np.inf, high=np.inf, shape=(self.scenario.observation_size,), dtype=np.float64
        )
        self.state: Optional[EnvState] = None

    def reset(
        self,
        *,
        seed: Optional[int] = None,
        options: Optional[dict[str, Any]] = None,
    ) -> tuple[np.ndarray, dict[str, Any]]:
        super().reset(seed=seed)
        self.state, obs = reset_state(self.scenario, self.np_random)
        return obs, {"state": self.state.copy()}

    def transition(self, action: np.ndarray) -> StepOutcome:
        """Step and return the full outcome."""
        if self.state is None:
            raise EnvError("reset() must be called before step()")
        outcome = step_state(self.scenario, self.ideal, self.state, action)
        self.state = outcome.state
        return outcome

    def step(self, action: np.ndarray) -> tuple[np.ndarray, float, bool, bool, dict[str, Any]]:
        outcome = self.transition(action)
        return (
            outcome.observation,
            outcome.rewards.unified,
            outcome.terminated,
            outcome.truncated,
            {"outcome": outcome},
        )
